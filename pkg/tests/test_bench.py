import json
import os
from fractions import Fraction

import numpy as np
import pytest

from dfmix import (
    ProfileCurve,
    RunTrace,
    SchemaError,
    data_curves,
    data_profile,
    default_solvers,
    performance_curves,
    performance_profile,
    read_curves_csv,
    read_traces_csv,
    recompute_profiles,
    run_benchmark,
    solved_at,
    write_curves_csv,
    write_traces_csv,
)
from dfmix.bench import _convergence_table
from dfmix.problems import list_problems


def trace(problem, solver, f, violation=None, n_vars=None):
    f = np.asarray(f, dtype=float)
    if violation is None:
        violation = np.zeros_like(f)
    return RunTrace(problem, solver, f, np.asarray(violation, dtype=float),
                    n_vars=n_vars)


class TestSolvedAt:
    def test_first_hit_is_one_based(self):
        tr = trace("p", "s", [5.0, 1.0, 0.5])
        assert solved_at(tr, f_low=0.5, f_hat0=5.0, tau=0.5) == 2

    def test_infeasible_entries_never_satisfy(self):
        tr = trace("p", "s", [5.0, 0.6, 0.5], violation=[0.0, 1e-9, 0.0])
        # the feasible middle entry would pass, but it is infeasible
        assert solved_at(tr, f_low=0.5, f_hat0=5.0, tau=0.1) == 3

    def test_never_solved_returns_none(self):
        tr = trace("p", "s", [5.0, 4.0])
        assert solved_at(tr, f_low=0.0, f_hat0=5.0, tau=0.1) is None

    def test_tau_zero_requires_the_best_value(self):
        tr = trace("p", "s", [2.0, 1.0, 0.5])
        assert solved_at(tr, f_low=0.5, f_hat0=2.0, tau=0.0) == 3

    def test_empty_trace(self):
        tr = trace("p", "s", [])
        assert solved_at(tr, f_low=0.0, f_hat0=1.0, tau=0.5) is None


class TestConvergenceTargets:
    def test_bound_target_is_worst_start(self):
        runs = [
            trace("p", "a", [10.0, 2.0]),
            trace("p", "b", [6.0, 4.0]),
        ]
        table, excluded = _convergence_table(runs, tau=0.5, constrained=False)
        # f_low = 2, f_hat = max first entries = 10, threshold = 6
        assert table == {"p": {"a": 2, "b": 1}}
        assert excluded == []

    def test_constrained_target_is_worst_feasible_anywhere(self):
        runs = [
            trace("p", "a", [100.0, 3.0], violation=[1.0, 0.0]),
            trace("p", "b", [7.0, 5.0]),
        ]
        table, excluded = _convergence_table(runs, tau=0.5, constrained=True)
        # f_low = 3, f_hat = 7 (the infeasible 100 is ignored), threshold = 5
        assert table == {"p": {"a": 2, "b": 2}}
        assert excluded == []

    def test_problem_without_feasible_point_is_excluded(self):
        runs = [
            trace("good", "a", [1.0]),
            trace("good", "b", [2.0]),
            trace("hopeless", "a", [1.0], violation=[0.5]),
            trace("hopeless", "b", [1.0], violation=[0.5]),
        ]
        table, excluded = _convergence_table(runs, tau=0.1, constrained=True)
        assert "hopeless" not in table
        assert excluded == ["hopeless"]


HAND_TABLE = {
    "p1": {"s1": 10, "s2": 20},
    "p2": {"s1": 30, "s2": 30},
    "p3": {"s1": None, "s2": 5},
}


class TestPerformanceCurves:
    def test_hand_example_is_exact(self):
        curves = performance_curves(HAND_TABLE, tau=0.1)
        assert set(curves) == {"s1", "s2"}
        s1, s2 = curves["s1"], curves["s2"]
        assert s1.abscissae == s2.abscissae == (Fraction(1), Fraction(2))
        assert s1.ordinates == (Fraction(2, 3), Fraction(2, 3))
        assert s2.ordinates == (Fraction(2, 3), Fraction(1))

    def test_requires_two_solvers(self):
        with pytest.raises(ValueError, match="two solvers"):
            performance_curves({"p": {"only": 3}}, tau=0.1)

    def test_from_traces(self):
        runs = [
            trace("p", "a", [10.0, 2.0]),
            trace("p", "b", [6.0, 4.0]),
        ]
        curves = performance_profile(runs, tau=0.5)
        assert curves["a"].ordinates[-1] == Fraction(1)
        assert curves["b"].abscissae[0] == Fraction(1)


class TestDataCurves:
    def test_hand_example_is_exact(self):
        table = {"p1": {"s1": 3, "s2": None}, "p2": {"s1": 8, "s2": 4}}
        dims = {"p1": 2, "p2": 3}
        curves = data_curves(table, dims, budget=10, tau=0.1)
        knots = tuple(Fraction(k) for k in range(5))  # ceil(10 / 3) = 4
        assert curves["s1"].abscissae == knots
        assert curves["s1"].ordinates == (
            Fraction(0), Fraction(1, 2), Fraction(1), Fraction(1), Fraction(1))
        assert curves["s2"].ordinates == (
            Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2),
            Fraction(1, 2))

    def test_from_traces_requires_dimensions(self):
        runs = [trace("p", "a", [1.0]), trace("p", "b", [1.0])]
        with pytest.raises(ValueError, match="n_vars"):
            data_profile(runs, tau=0.5, budget=10)
        runs = [trace("p", "a", [1.0], n_vars=2),
                trace("p", "b", [1.0], n_vars=2)]
        curves = data_profile(runs, tau=0.5, budget=6)
        assert curves["a"].abscissae == (Fraction(0), Fraction(1), Fraction(2))


class TestTracesCsv:
    def test_round_trip_is_bitwise(self, tmp_path):
        path = str(tmp_path / "traces.csv")
        runs = [
            trace("p1", "a", [0.1 + 0.2, 1e-300, 1.0], [0.0, 0.0, 1e-17]),
            trace("p2", "a", [float("inf")]),
        ]
        write_traces_csv(runs, path)
        back = read_traces_csv(path)
        assert [(tr.problem, tr.solver) for tr in back] == [("p1", "a"), ("p2", "a")]
        np.testing.assert_array_equal(back[0].f, runs[0].f)
        np.testing.assert_array_equal(back[0].violation, runs[0].violation)
        np.testing.assert_array_equal(back[1].f, runs[1].f)

    def test_empty_traces_write_header_only(self, tmp_path):
        path = str(tmp_path / "traces.csv")
        write_traces_csv([trace("p", "a", [])], path)
        assert read_traces_csv(path) == []

    def test_bad_header(self, tmp_path):
        path = tmp_path / "traces.csv"
        path.write_text("problem,solver,eval_index,f\n")
        with pytest.raises(SchemaError, match="header"):
            read_traces_csv(str(path))

    def test_broken_index_sequence(self, tmp_path):
        path = tmp_path / "traces.csv"
        path.write_text(
            "problem,solver,eval_index,f,violation\n"
            "p,a,1,1.0,0.0\n"
            "p,a,3,0.5,0.0\n"
        )
        with pytest.raises(SchemaError, match="sequence"):
            read_traces_csv(str(path))

    def test_non_numeric_field(self, tmp_path):
        path = tmp_path / "traces.csv"
        path.write_text(
            "problem,solver,eval_index,f,violation\np,a,1,abc,0.0\n")
        with pytest.raises(SchemaError, match="non-numeric"):
            read_traces_csv(str(path))

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "traces.csv"
        path.write_text("problem,solver,eval_index,f,violation\np,a,1,1.0\n")
        with pytest.raises(SchemaError, match="5 fields"):
            read_traces_csv(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot open"):
            read_traces_csv(str(tmp_path / "nope.csv"))


class TestCurvesCsv:
    def test_round_trip_preserves_exact_ordinates(self, tmp_path):
        path = str(tmp_path / "curves.csv")
        curves = {0.1: performance_curves(HAND_TABLE, tau=0.1)}
        write_curves_csv(curves, path)
        rows = read_curves_csv(path)
        assert rows[0] == ("s1", 0.1, 1.0, float(Fraction(2, 3)))
        assert rows[3] == ("s2", 0.1, 2.0, 1.0)
        assert len(rows) == 4

    def test_bad_header(self, tmp_path):
        path = tmp_path / "curves.csv"
        path.write_text("solver,tau,x,y\n")
        with pytest.raises(SchemaError, match="header"):
            read_curves_csv(str(path))

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "curves.csv"
        path.write_text("solver,tau,abscissa,ordinate\ns,0.1,one,0.5\n")
        with pytest.raises(SchemaError, match="non-numeric"):
            read_curves_csv(str(path))


def file_bytes(directory, name):
    with open(os.path.join(directory, name), "rb") as fh:
        return fh.read()


class TestRunBenchmark:
    SPECS = [s for s in list_problems("all")
             if s.name in ("sepconvex4", "mixnorm4", "sepconvex4-g4")]

    def test_bundle_and_persistence_are_deterministic(self, tmp_path):
        dirs = [str(tmp_path / "one"), str(tmp_path / "two")]
        for d in dirs:
            run_benchmark(self.SPECS, budget=60, taus=(0.1, 0.01), seed=7,
                          out_dir=d)
        for name in ("traces.csv", "curves_performance.csv", "curves_data.csv"):
            assert file_bytes(dirs[0], name) == file_bytes(dirs[1], name)

    def test_bundle_contents(self, tmp_path):
        out = str(tmp_path / "bundle")
        bundle = run_benchmark(self.SPECS, budget=60, taus=(0.1,), seed=7,
                               out_dir=out)
        assert len(bundle.traces) == len(self.SPECS) * 2
        assert all(len(tr) <= 60 for tr in bundle.traces)
        assert set(bundle.performance) == {0.1}
        assert set(bundle.data) == {0.1}
        assert bundle.manifest["failed_runs"] == []
        assert bundle.manifest["budget"] == 60
        assert sorted(bundle.manifest["solvers"]) == ["coordinate", "full"]
        with open(os.path.join(out, "manifest.json")) as fh:
            manifest = json.load(fh)
        assert manifest["seed"] == 7
        traces = read_traces_csv(os.path.join(out, "traces.csv"))
        assert {(tr.problem, tr.solver) for tr in traces} == {
            (s.name, label) for s in self.SPECS for label in ("full", "coordinate")
        }

    def test_crashed_run_is_recorded_not_raised(self, tmp_path, monkeypatch):
        import dfmix.bench as bench_module

        def explode(instance, config):
            raise RuntimeError("synthetic failure")

        monkeypatch.setattr(bench_module, "solve_bound_constrained", explode)
        bundle = run_benchmark(self.SPECS[:1], budget=20, taus=(0.1,), seed=0)
        assert len(bundle.manifest["failed_runs"]) == 2
        assert all(len(tr) == 0 for tr in bundle.traces)

    def test_recompute_profiles_is_byte_identical(self, tmp_path):
        original = str(tmp_path / "orig")
        rebuilt = str(tmp_path / "rebuilt")
        run_benchmark(self.SPECS, budget=60, taus=(0.1, 0.01), seed=7,
                      out_dir=original)
        recompute_profiles(original, rebuilt)
        for name in ("curves_performance.csv", "curves_data.csv"):
            assert file_bytes(original, name) == file_bytes(rebuilt, name)

    def test_recompute_rejects_unknown_problems(self, tmp_path):
        out = str(tmp_path / "orig")
        run_benchmark(self.SPECS[:1], budget=20, taus=(0.1,), seed=0,
                      out_dir=out)
        extra = trace("mystery", "full", [1.0])
        traces = read_traces_csv(os.path.join(out, "traces.csv"))
        write_traces_csv(traces + [extra], os.path.join(out, "traces.csv"))
        with pytest.raises(SchemaError, match="absent from manifest"):
            recompute_profiles(out, str(tmp_path / "rebuilt"))

    def test_default_solver_pair(self):
        solvers = default_solvers()
        assert set(solvers) == {"full", "coordinate"}
        assert solvers["coordinate"].use_dense is False
        assert solvers["coordinate"].expand_directions is False
        assert solvers["full"].use_dense is True


class TestProfileCurveType:
    def test_curve_fields(self):
        curve = ProfileCurve("s", 0.1, (Fraction(1),), (Fraction(1, 2),))
        assert curve.solver == "s"
        assert curve.ordinates[0] == Fraction(1, 2)
