import json

import numpy as np
import pytest

from sparsecut import (FAMILIES, InputError, WeightedGraphPair,
                       exact_sparsest_cut, format_instance, generate,
                       parse_instance, run_pipeline, sparsity)
from sparsecut.cli import main
from sparsecut.graphs import Cut

from conftest import four_cycle_complete


class TestGenerators:
    def test_deterministic_bytes(self):
        for family in FAMILIES:
            a = format_instance(generate(family, 6, 1))
            b = format_instance(generate(family, 6, 1))
            assert a == b

    def test_seeds_differ(self):
        assert format_instance(generate("uniform", 6, 1)) != \
            format_instance(generate("uniform", 6, 2))

    def test_unknown_family(self):
        with pytest.raises(InputError):
            generate("nope", 5, 0)

    def test_smallest_instances_valid(self):
        for family in FAMILIES:
            g = generate(family, 2, 1)
            assert g.n == 2
            assert g.total_demand > 0

    def test_uniform_is_complete_unit_demand(self):
        g = generate("uniform", 7, 3)
        assert len(g.demand) == 21
        assert all(w == 1.0 for w in g.demand.values())
        assert len(g.cost) == 21

    def test_planted_bridge_cut_is_optimal(self):
        g = generate("planted", 10, 7)
        res = exact_sparsest_cut(g)
        bridge = sparsity(g, Cut.from_vertices(range(5), 10))
        assert res.sparsity == pytest.approx(bridge.sparsity, abs=1e-12)
        side = set(res.cut.vertices())
        assert side in ({0, 1, 2, 3, 4}, {5, 6, 7, 8, 9})

    def test_expander_vs_pair_single_demand(self):
        g = generate("expander-vs-pair", 9, 4)
        assert len(g.demand) == 1
        # union of three closed tours: even total degree at every vertex
        deg = np.zeros(9)
        for (i, j), w in g.cost.items():
            deg[i] += w
            deg[j] += w
        assert np.allclose(deg, 6.0)


class TestRunReport:
    def test_invariants_on_pipeline_output(self):
        rep = run_pipeline(four_cycle_complete())
        assert rep.phi_sdp <= rep.phi_star + 1e-6
        assert rep.phi_star <= rep.phi_alg + 1e-9
        assert rep.phi_star == pytest.approx(0.5)
        assert rep.phi_alg == pytest.approx(0.5)
        if rep.min_bound is not None:
            assert rep.phi_alg <= rep.min_bound + 1e-6
        assert rep.courant_fisher_holds

    def test_report_deterministic_modulo_timing(self):
        g = four_cycle_complete()
        a = run_pipeline(g).to_json(include_timing=False)
        b = run_pipeline(g).to_json(include_timing=False)
        assert a == b

    def test_oracle_skipped_above_threshold(self):
        rep = run_pipeline(four_cycle_complete(), oracle_max=3)
        assert rep.phi_star is None
        assert rep.courant_fisher_holds is None
        d = rep.to_dict()
        assert d["phi_star"] is None

    def test_json_round_trips(self):
        rep = run_pipeline(four_cycle_complete())
        parsed = json.loads(rep.to_json())
        assert parsed["phi_alg"]["value"] == rep.phi_alg
        assert parsed["instance"]["n"] == 4
        assert len(parsed["lambda"]) == 3
        assert len(parsed["sigma"]) == 4


class TestCli:
    def _write_instance(self, tmp_path, g):
        path = tmp_path / "inst.txt"
        path.write_text(format_instance(g))
        return str(path)

    def test_run_four_cycle(self, tmp_path, capsys):
        path = self._write_instance(tmp_path, four_cycle_complete())
        assert main(["run", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["phi_star"]["value"] == pytest.approx(0.5)
        assert out["phi_alg"]["value"] == pytest.approx(0.5)
        assert out["phi_sdp"] <= 0.5 + 1e-4

    def test_run_report_and_gram_files(self, tmp_path):
        path = self._write_instance(tmp_path, four_cycle_complete())
        rep = tmp_path / "rep.json"
        gram = tmp_path / "gram.txt"
        assert main(["run", path, "--report", str(rep), "--dump-gram", str(gram)]) == 0
        data = json.loads(rep.read_text())
        assert "timing" in data
        G = np.array([[float(v) for v in row.split()]
                      for row in gram.read_text().splitlines() if row.strip()])
        assert G.shape == (4, 4)
        assert np.allclose(G, G.T)

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("n 3\nc 1 1 2.0\nd 1 2 1.0\n")
        assert main(["run", str(bad)]) == 2
        assert "parse error" in capsys.readouterr().err

    def test_missing_file_exit_code(self, capsys):
        assert main(["run", "/nonexistent/instance.txt"]) == 2

    def test_usage_error_exit_code(self, capsys):
        assert main(["run"]) == 5
        assert main(["generate", "nope", "5", "1"]) == 5
        assert main([]) == 5

    def test_generate_writes_deterministic_file(self, tmp_path, capsys):
        out1 = tmp_path / "a.txt"
        out2 = tmp_path / "b.txt"
        assert main(["generate", "uniform", "6", "1", "-o", str(out1)]) == 0
        assert main(["generate", "uniform", "6", "1", "-o", str(out2)]) == 0
        assert out1.read_text() == out2.read_text()
        parse_instance(out1.read_text())

    def test_generate_stdout(self, capsys):
        assert main(["generate", "uniform", "2", "1"]) == 0
        g = parse_instance(capsys.readouterr().out)
        assert g.n == 2

    def test_cli_determinism_modulo_timing(self, tmp_path):
        path = self._write_instance(tmp_path, four_cycle_complete())
        reports = []
        for name in ("r1.json", "r2.json"):
            rep = tmp_path / name
            assert main(["run", path, "--report", str(rep)]) == 0
            data = json.loads(rep.read_text())
            del data["timing"]
            reports.append(json.dumps(data, sort_keys=True))
        assert reports[0] == reports[1]

    def test_audit_round_trip_and_tamper(self, tmp_path, capsys):
        path = self._write_instance(tmp_path, four_cycle_complete())
        gram = tmp_path / "gram.txt"
        assert main(["run", path, "--dump-gram", str(gram)]) == 0
        capsys.readouterr()
        assert main(["audit", str(gram), path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["triangle_violation"] <= 1e-6
        # tamper: an indefinite direction violating the triangle family
        G = np.array([[float(v) for v in row.split()]
                      for row in gram.read_text().splitlines() if row.strip()])
        X = np.array([[0.0], [3.0], [4.0], [0.0]])
        bad = X @ X.T
        gram.write_text("\n".join(" ".join(repr(float(v)) for v in row) for row in bad) + "\n")
        assert main(["audit", str(gram), path]) == 4
        assert "property violation" in capsys.readouterr().err

    def test_audit_dimension_mismatch(self, tmp_path, capsys):
        path = self._write_instance(tmp_path, four_cycle_complete())
        gram = tmp_path / "gram.txt"
        gram.write_text("1.0 0.0\n0.0 1.0\n")
        assert main(["audit", str(gram), path]) == 5

    def test_convergence_failure_exit_code(self, tmp_path, capsys):
        # this instance needs triangle cuts, so one separation round cannot finish
        path = self._write_instance(tmp_path, generate("uniform", 6, 1))
        assert main(["run", path, "--max-outer", "1"]) == 3
        assert "convergence error" in capsys.readouterr().err

    def test_solver_flags_accepted(self, tmp_path, capsys):
        path = self._write_instance(tmp_path, four_cycle_complete())
        code = main(["run", path, "--feas-tol", "1e-7", "--obj-tol", "1e-5",
                     "--max-outer", "50", "--sep-batch", "20", "--oracle-max", "0"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["phi_star"] is None
