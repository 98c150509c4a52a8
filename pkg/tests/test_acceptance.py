"""Acceptance suite: the ten exit criteria, each at its stated budget and
tolerance, printing one pass/fail line per criterion (run with ``-s`` to see
them live; pytest echoes them on failure regardless).

Statistical criteria use 4 standard errors.  The distance criterion treats
"reaches the noise floor" as: the final two-sample distance is consistent
with the two-sample null at the 1% level for the sample sizes used (the
measured reference-vs-reference floor is reported alongside; it is itself a
draw from that null).
"""

import math
import time

from anisub import ctrw, verify
from anisub.models import (CommonFactor, IndependentStable, StableTerm,
                           single_atom_model)
from anisub.rng import RngSpec

SEED = 42
BUDGET = 100_000

ATOM = single_atom_model(0.5)
INDEP = IndependentStable(0.5)
CF = CommonFactor(StableTerm(0.5), StableTerm(0.5), StableTerm(0.5))


def _report(criterion, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def _suite(model, names, budget=BUDGET):
    return verify.run_identity_suite(model, names, budget=budget, seed=SEED)


def _worst(verdicts):
    finite = [v.z for v in verdicts if not math.isinf(v.z)]
    return max(finite) if finite else 0.0


def test_criterion_01_subordinator_law():
    """Monte Carlo transform of the subordinator pair at a 9-point frequency
    grid, per model variant, against exp(-S); 1e5 paths, 4 se."""
    verdicts = []
    for model in (ATOM, INDEP, CF):
        verdicts += _suite(model, ["subordinator-laplace"])
    ok = all(v.passed for v in verdicts)
    _report("criterion-01 subordinator-law", ok,
            f"{len(verdicts)} grid points x 3 variants, worst z={_worst(verdicts):.2f}")


def test_criterion_02_biparameter_transform():
    """Two-time transform at t=(1,2) and (2,1), bisector-atom and
    common-factor models; 4 se."""
    verdicts = _suite(ATOM, ["biparam-laplace"]) + _suite(CF, ["biparam-laplace"])
    ok = all(v.passed for v in verdicts)
    _report("criterion-02 biparameter-transform", ok,
            f"4 checks, worst z={_worst(verdicts):.2f}")


def test_criterion_03_tail_identity():
    """Exponential-randomization estimate of the jump-tail transform equals
    (T1+T2-S)/(eta1 eta2); exact zero on both sides for the independent
    model."""
    (atom_v,) = _suite(ATOM, ["tail-transform"])
    (ind_v,) = _suite(INDEP, ["tail-transform"])
    exact_zero = ind_v.lhs == 0.0 and ind_v.rhs == 0.0
    ok = atom_v.passed and ind_v.passed and exact_zero
    _report("criterion-03 tail-identity", ok,
            f"atom z={atom_v.z:.2f}; independent lhs={ind_v.lhs} rhs={ind_v.rhs}")


def test_criterion_04_inversion_duality():
    """Survival of the inverse pair vs the forward-pair law at four grid
    points, both sides simulated independently with 1e5 replicates."""
    verdicts = _suite(ATOM, ["inversion-duality"])
    ok = all(v.passed for v in verdicts) and len(verdicts) == 4
    _report("criterion-04 inversion-duality", ok,
            f"4 grid points, worst z={_worst(verdicts):.2f}")


def test_criterion_05_diagonal_mass():
    """Bisector atom at equal levels lands on the diagonal always; the
    independent model stays below the O(dx) artifact bound and halving dx
    shrinks the artifact by at least 1.5x."""
    (atom_v,) = _suite(ATOM, ["diagonal-atom"])
    artifact = _suite(INDEP, ["diagonal-artifact"])
    by_name = {v.name: v for v in artifact}
    halving = by_name["diagonal-artifact[halving]"]
    ok = (atom_v.lhs == 1.0 and atom_v.passed
          and all(v.passed for v in artifact))
    _report("criterion-05 diagonal-mass", ok,
            f"atom freq={atom_v.lhs}; artifact "
            f"{by_name['diagonal-artifact[dx=0.02]'].lhs:.4f}@dx=.02 "
            f"{by_name['diagonal-artifact[dx=0.01]'].lhs:.4f}@dx=.01 "
            f"ratio={halving.lhs:.2f}")


def test_criterion_06_covariance_formula():
    """Paired exponential-randomization estimate of the covariance transform
    against the closed form (bisector atom), and against zero for the
    independent model; 4 se."""
    (atom_v,) = _suite(ATOM, ["covariance"])
    (ind_v,) = _suite(INDEP, ["independent-covariance"])
    ok = atom_v.passed and ind_v.passed
    _report("criterion-06 covariance", ok,
            f"atom lhs={atom_v.lhs:.4f} rhs={atom_v.rhs:.4f} z={atom_v.z:.2f}; "
            f"independent z={ind_v.z:.2f}")


def test_criterion_07_mittag_leffler_interarrivals():
    """First-holding-time survival at t=1 (unit rate, index 1/2) equals the
    Mittag-Leffler value 0.427584, and the joint two-clock generalization
    matches the inverse-pair transform; 1e5 replicates, 4 se."""
    (ml_v,) = _suite(ATOM, ["ml-interarrival"])
    (joint_v,) = _suite(ATOM, ["interarrival-joint"])
    anchored = abs(ml_v.rhs - 0.427584) < 1e-6
    ok = ml_v.passed and joint_v.passed and anchored
    _report("criterion-07 ml-interarrivals", ok,
            f"marginal lhs={ml_v.lhs:.5f} target={ml_v.rhs:.6f} z={ml_v.z:.2f}; "
            f"joint z={joint_v.z:.2f}")


def test_criterion_08_subdiffusion():
    """Mean-square-displacement slope over t in {1,2,4,8} equals the index
    0.5 within 0.05 at 1e5 trajectories; the characteristic-function
    transform at unit frequencies matches the closed form within 4 se."""
    (msd_v,) = _suite(ATOM, ["subdiff-msd"])
    (chf_v,) = _suite(ATOM, ["subdiff-char"])
    slope_ok = abs(msd_v.lhs - 0.5) <= 0.05
    ok = slope_ok and msd_v.passed and chf_v.passed
    _report("criterion-08 subdiffusion", ok,
            f"slope={msd_v.lhs:.4f} (|err|<=0.05); charfn z={chf_v.z:.2f}")


def test_criterion_09_ctrw_convergence():
    """Rescaled-walk position marginal approaches the simulated limit across
    c in {10, 1e2, 1e3, 1e4} (at most one inversion) and is indistinguishable
    from it at c=1e4 at the 1% two-sample level, with 1e4 replicates."""
    t0 = time.time()
    spec = ctrw.CTRWSpec(0.5, ATOM.m)
    exp = ctrw.ScalingExperiment(c_values=(10.0, 100.0, 1000.0, 10_000.0),
                                 t_eval=1.0, n_reps=10_000)
    res = ctrw.convergence_sweep(spec, exp, RngSpec(SEED, 0))
    n = exp.n_reps
    crit = 1.628 * math.sqrt(2.0 / n)  # 1% two-sample critical value
    seq1 = [r.ks_pos1 for r in res.rows]
    seq2 = [r.ks_pos2 for r in res.rows]
    inv_ok = res.max_inversions("ks_pos1") <= 1 and res.max_inversions("ks_pos2") <= 1
    floor_ok = seq1[-1] <= crit and seq2[-1] <= crit
    elapsed = time.time() - t0
    ok = inv_ok and floor_ok and elapsed < 600.0
    _report("criterion-09 ctrw-convergence", ok,
            f"ks_pos1={['%.4f' % v for v in seq1]} final<=crit={crit:.4f} "
            f"floor={res.noise_floor:.4f} time={elapsed:.0f}s")


def test_criterion_10_determinism():
    """Identical configuration and seed give byte-identical verdict files;
    splitting the budget over 1 vs 8 workers leaves merged means equal to
    relative 1e-12 with identical replicate counts.  (Determinism does not
    depend on the budget; a reduced one keeps the double run fast.)"""
    import io
    names = ["subordinator-laplace", "tail-transform", "covariance"]
    bufs = []
    for _ in range(2):
        vs = verify.run_identity_suite(ATOM, names, budget=20_000, seed=SEED)
        buf = io.StringIO()
        verify.write_verdicts_ndjson(vs, buf)
        bufs.append(buf.getvalue().encode())
    byte_identical = bufs[0] == bufs[1]

    one = verify.run_identity_suite(ATOM, names, budget=20_000, seed=SEED,
                                    workers=1)
    eight = verify.run_identity_suite(ATOM, names, budget=20_000, seed=SEED,
                                      workers=8)
    worker_ok = all(
        abs(x.lhs - y.lhs) <= 1e-12 * max(1.0, abs(x.lhs)) and x.rhs == y.rhs
        for x, y in zip(one, eight))
    ok = byte_identical and worker_ok
    _report("criterion-10 determinism", ok,
            f"byte-identical={byte_identical}, 1-vs-8-workers match={worker_ok}")
