import math
import os
import tempfile
import unittest

import numpy as np
import numpy.testing as npt

from eigenbound.bounds import (
    BoundInput,
    BoundInputError,
    compute_D0,
    compute_D1,
    eval_divfree_suite,
    eval_expanding_annulus,
    eval_expanding_ball,
    eval_expanding_ball_gap,
    eval_identity_quadratic,
    eval_lower_order_sum,
    eval_mode_checks,
    eval_oracle_agreement,
    eval_recursion,
    eval_rigidity_suite,
    eval_sharpgap,
    eval_thm_quadratic,
    eval_yang_D0,
    eval_yang_suite,
    make_report,
    read_reports_csv,
    write_reports_csv,
    write_reports_json,
)
from eigenbound.bounds.divfree import eval_divfree_quadratic
from eigenbound.bounds.soliton import expanding_ball_first_bound
from eigenbound.fields import FieldConstants

PI2 = math.pi**2
SQUARE = PI2 * np.array([2.0, 5.0, 5.0, 8.0, 10.0, 10.0, 13.0, 13.0, 17.0, 17.0])


def constants(eps=1.0, delta=1.0, T0=0.0, eta0=0.0, C0=0.0):
    return FieldConstants(eps=eps, delta=delta, T0=T0, eta0=eta0, C0=C0)


def anisotropic_square(count):
    values = sorted(PI2 * (2 * p * p + 3 * q * q) for p in range(1, 8) for q in range(1, 8))
    return np.array(values[:count])


class TestBoundInput(unittest.TestCase):
    def test_rejects_unsorted(self):
        self.assertRaises(BoundInputError, BoundInput, 2, 0.0, [2.0, 1.0])

    def test_rejects_inconsistent_divnorm(self):
        self.assertRaises(BoundInputError, BoundInput, 2, 1.0, [1.0, 2.0], [1.5, 0.0])

    def test_rejects_negative_alpha(self):
        self.assertRaises(BoundInputError, BoundInput, 2, -1.0, [1.0, 2.0])

    def test_one_based_access(self):
        inp = BoundInput(2, 0.0, [1.0, 3.0])
        self.assertEqual(inp.sigma(1), 1.0)
        self.assertEqual(inp.sigma(2), 3.0)
        npt.assert_array_equal(inp.divnorms, [0.0, 0.0])


class TestShiftConstants(unittest.TestCase):
    def test_alpha_zero(self):
        inp = BoundInput(2, 0.0, [1.0, 2.0], [0.4, 0.1], constants(C0=0.75))
        self.assertEqual(compute_D0(inp, 2), 0.75)

    def test_zero(self):
        self.assertEqual(compute_D0(BoundInput(2, 0.0, [1.0, 2.0]), 2), 0.0)

    def test_arithmetic(self):
        inp = BoundInput(2, 1.0, [1.0, 2.0], [0.3, 0.5], constants(C0=2.0))
        self.assertAlmostEqual(compute_D0(inp, 2), 1.7, delta=1e-15)
        self.assertAlmostEqual(compute_D1(inp), 1.7, delta=1e-15)

    def test_positivity(self):
        inp = BoundInput(2, 0.0, [1.0, 2.0], constants=constants(C0=-1.5))
        self.assertRaises(BoundInputError, compute_D0, inp, 2)


class TestQuadratic(unittest.TestCase):
    def test_square_k1(self):
        r = eval_thm_quadratic(BoundInput(2, 0.0, [2 * PI2, 5 * PI2]), 1)
        self.assertAlmostEqual(r.lhs, 9 * PI2**2, delta=1e-10)
        self.assertAlmostEqual(r.rhs, 12 * PI2**2, delta=1e-10)
        self.assertTrue(r.satisfied)
        self.assertEqual((r.id, r.family, r.k), ("thm_quadratic", "quadratic", 1))

    def test_degenerate_gap(self):
        r = eval_thm_quadratic(BoundInput(2, 0.0, [3.0, 3.0]), 1)
        self.assertEqual(r.lhs, 0.0)
        self.assertEqual(r.margin, r.rhs)
        self.assertTrue(r.satisfied)

    def test_needs_k_plus_one(self):
        self.assertRaises(BoundInputError, eval_thm_quadratic, BoundInput(2, 0.0, [1.0, 2.0]), 2)

    def test_tensor_constants_enter(self):
        base = BoundInput(2, 0.0, SQUARE)
        stretched = BoundInput(2, 0.0, SQUARE, constants=constants(eps=1.0, delta=2.0, T0=0.5))
        self.assertGreater(eval_thm_quadratic(stretched, 4).rhs, eval_thm_quadratic(base, 4).rhs)


class TestReductionChain(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def random_input(self, alpha_zero: bool) -> BoundInput:
        rng = self.rng
        n = int(rng.integers(2, 5))
        size = int(rng.integers(2, 12))
        sigmas = np.sort(rng.uniform(1.0, 100.0, size))
        if alpha_zero:
            alpha = 0.0
            divnorms = rng.uniform(0.0, 1.0, size)
            C0 = float(rng.uniform(-0.5 * sigmas[0], 5.0))
        else:
            alpha = float(rng.uniform(0.0, 3.0))
            divnorms = rng.uniform(0.0, 0.9, size) * sigmas / max(alpha, 1e-12)
            C0 = float(rng.uniform(0.0, 5.0))
        return BoundInput(n, alpha, sigmas, divnorms, constants(C0=C0))

    def test_thm_matches_yang_when_alpha_is_zero(self):
        for _ in range(1000):
            inp = self.random_input(alpha_zero=True)
            for k in range(1, inp.num_modes):
                thm = eval_thm_quadratic(inp, k)
                yang = eval_yang_D0(inp, k)
                self.assertEqual(thm.lhs, yang.lhs)
                self.assertLessEqual(abs(thm.rhs - yang.rhs), 1e-13 * abs(yang.rhs))

    def test_thm_matches_identity_form(self):
        for _ in range(1000):
            inp = self.random_input(alpha_zero=False)
            for k in range(1, inp.num_modes):
                thm = eval_thm_quadratic(inp, k)
                identity = eval_identity_quadratic(inp, k)
                self.assertLessEqual(abs(thm.rhs - identity.rhs), 1e-13 * abs(identity.rhs))
                # per-mode divnorms never exceed the min-divnorm shift
                yang = eval_yang_D0(inp, k)
                self.assertLessEqual(thm.rhs, yang.rhs * (1 + 1e-13))

    def test_uniform_divnorms_match_yang(self):
        inp = BoundInput(2, 1.0, SQUARE, np.full(SQUARE.size, 0.25), constants(C0=1.0))
        for k in range(1, SQUARE.size):
            self.assertAlmostEqual(
                eval_thm_quadratic(inp, k).rhs, eval_yang_D0(inp, k).rhs, delta=1e-13 * eval_yang_D0(inp, k).rhs
            )

    def test_rhs_monotone_in_C0_and_alpha(self):
        for _ in range(200):
            inp = self.random_input(alpha_zero=True)
            k = inp.num_modes - 1
            raised = BoundInput(inp.n, inp.alpha, inp.sigmas, inp.divnorms, constants(C0=inp.constants.C0 + 1.0))
            self.assertGreaterEqual(eval_thm_quadratic(raised, k).rhs, eval_thm_quadratic(inp, k).rhs)
            coupled = BoundInput(inp.n, 1.0, inp.sigmas, np.zeros(inp.num_modes), inp.constants)
            self.assertGreaterEqual(eval_thm_quadratic(coupled, k).rhs, eval_thm_quadratic(inp, k).rhs)


class TestLowerOrderSum(unittest.TestCase):
    def test_square(self):
        reports = eval_lower_order_sum(BoundInput(2, 0.0, [2 * PI2, 5 * PI2, 5 * PI2]))
        self.assertEqual([r.id for r in reports], ["lower_order_sum", "lower_order_sum_identity"])
        for r in reports:
            self.assertAlmostEqual(r.lhs, 6 * PI2, delta=1e-12)
            self.assertAlmostEqual(r.rhs, 8 * PI2, delta=1e-12)
            self.assertEqual(r.k, 2)
            self.assertTrue(r.satisfied)

    def test_degenerate(self):
        reports = eval_lower_order_sum(BoundInput(3, 0.0, [4.0] * 4))
        self.assertEqual(reports[0].lhs, 0.0)
        self.assertTrue(reports[0].satisfied)

    def test_expanding_annulus_form(self):
        inp = BoundInput(2, 0.0, [10.0, 11.0, 11.0], constants=constants(C0=-2.0))
        r = eval_expanding_annulus(inp, -1.0)
        self.assertEqual(r.rhs, 4.0 * (10.0 - 2.0))
        self.assertEqual(r.lhs, 2.0)

    def test_insufficient_modes(self):
        self.assertRaises(BoundInputError, eval_lower_order_sum, BoundInput(2, 0.0, [1.0, 2.0]))

    def test_non_identity_context_emits_one_report(self):
        inp = BoundInput(2, 0.0, SQUARE, constants=constants(eps=2.0, delta=3.0))
        self.assertEqual(len(eval_lower_order_sum(inp)), 1)


class TestYangSuite(unittest.TestCase):
    def test_square_k1(self):
        r = eval_yang_D0(BoundInput(2, 0.0, SQUARE), 1)
        # sigma_2 <= 3 sigma_1
        self.assertTrue(r.satisfied)
        self.assertAlmostEqual(r.rhs / (SQUARE[1] - SQUARE[0]), 2 * SQUARE[0], delta=1e-10)

    def test_equal_pair(self):
        r = eval_yang_D0(BoundInput(2, 0.0, [4.0, 4.0]), 1)
        self.assertEqual((r.lhs, r.rhs), (0.0, 0.0))
        self.assertTrue(r.satisfied)

    def test_arithmetic(self):
        r = eval_yang_D0(BoundInput(2, 2.0, [1.0, 2.0]), 1)
        self.assertEqual(r.lhs, 1.0)
        self.assertEqual(r.rhs, 4.0)

    def test_classical_variant(self):
        ids = [r.id for r in eval_yang_suite(BoundInput(2, 1.0, [2.0, 3.0], [0.5, 0.5]), 1)]
        self.assertEqual(ids, ["yang_D0", "yang_classical"])
        ids = [r.id for r in eval_yang_suite(BoundInput(2, 0.0, [2.0, 3.0], constants=constants(C0=1.0)), 1)]
        self.assertEqual(ids, ["yang_D0"])

    def test_square_spectrum_all_k(self):
        inp = BoundInput(2, 0.0, SQUARE)
        for k in range(1, SQUARE.size):
            reports = eval_yang_suite(inp, k) + list(eval_sharpgap(inp, k)) + [eval_recursion(inp, k)]
            for r in reports:
                self.assertTrue(r.satisfied, f"{r.id} at k={k}")


class TestSharpGap(unittest.TestCase):
    def test_k1_zero_variance(self):
        inp = BoundInput(2, 1.0, [3.0, 4.0])
        level, _ = eval_sharpgap(inp, 1)
        c = 2.0 * 3.0 / 4.0
        self.assertAlmostEqual(level.rhs, (1 + 2 * c) * 3.0, delta=1e-14)

    def test_square_k2(self):
        level, gap = eval_sharpgap(BoundInput(2, 0.0, [2 * PI2, 5 * PI2, 5 * PI2]), 2)
        self.assertAlmostEqual(level.rhs / PI2, 7 + math.sqrt(5.5), delta=1e-12)
        self.assertAlmostEqual(level.rhs / PI2, 9.345, delta=1e-3)
        self.assertAlmostEqual(gap.rhs / PI2, 2 * math.sqrt(5.5), delta=1e-12)
        self.assertEqual(level.lhs, 5 * PI2)
        self.assertEqual(gap.lhs, 0.0)
        self.assertTrue(level.satisfied and gap.satisfied)

    def test_equal_eigenvalues(self):
        level, gap = eval_sharpgap(BoundInput(2, 0.0, [6.0, 6.0, 6.0]), 2)
        c = 1.0
        self.assertAlmostEqual(level.rhs, (1 + 2 * c) * 6.0, delta=1e-13)
        self.assertTrue(level.satisfied and gap.satisfied)

    def test_negative_radicand(self):
        self.assertRaises(BoundInputError, eval_sharpgap, BoundInput(2, 0.0, [1.0, 100.0, 100.0]), 2)


class TestRecursion(unittest.TestCase):
    def test_square_k4(self):
        r = eval_recursion(BoundInput(2, 0.0, SQUARE), 4)
        self.assertAlmostEqual(r.rhs, 24 * PI2, delta=1e-12)
        self.assertAlmostEqual(r.lhs, 10 * PI2, delta=1e-12)
        self.assertTrue(r.satisfied)

    def test_k1_matches_sharp_gap_level(self):
        for alpha in (0.0, 0.5, 2.0):
            inp = BoundInput(2, alpha, SQUARE, np.full(SQUARE.size, 0.1), constants(C0=0.3))
            level, _ = eval_sharpgap(inp, 1)
            rec = eval_recursion(inp, 1)
            self.assertLessEqual(abs(rec.rhs - level.rhs), 1e-12 * abs(level.rhs))

    def test_decreasing_in_dimension(self):
        ratios = []
        for n in range(2, 12):
            inp = BoundInput(n, 0.0, SQUARE)
            ratios.append(eval_recursion(inp, 3).rhs / inp.sigma(1))
        self.assertTrue(np.all(np.diff(ratios) < 0))
        self.assertAlmostEqual(ratios[-1], (1 + 4 / 11) * 3 ** (2 / 11), delta=1e-12)


class TestRigidity(unittest.TestCase):
    def test_five_reports(self):
        reports = eval_rigidity_suite(BoundInput(2, 0.0, SQUARE), 3)
        self.assertEqual(
            [r.id for r in reports],
            [
                "rigidity_quadratic",
                "rigidity_sharp_gap_level",
                "rigidity_sharp_gap_gap",
                "rigidity_recursion",
                "rigidity_lower_order_sum",
            ],
        )
        self.assertTrue(all(r.satisfied for r in reports))
        self.assertEqual(reports[-1].rhs, 4.0 * SQUARE[0])

    def test_k1_reduces_to_three_sigma_one(self):
        first = eval_rigidity_suite(BoundInput(2, 0.0, [1.0, 3.0, 3.0]), 1)[0]
        self.assertEqual(first.lhs, first.rhs)
        self.assertTrue(eval_rigidity_suite(BoundInput(2, 0.0, [1.0, 2.9, 3.0]), 1)[0].satisfied)
        self.assertFalse(eval_rigidity_suite(BoundInput(2, 0.0, [1.0, 3.1, 3.2]), 1)[0].satisfied)

    def test_premises(self):
        inp = BoundInput(2, 0.0, SQUARE, constants=constants(C0=1e-6))
        self.assertRaises(BoundInputError, eval_rigidity_suite, inp, 1)
        self.assertRaises(BoundInputError, eval_rigidity_suite, BoundInput(2, 1.0, SQUARE), 1)


class TestConstantMonotonicity(unittest.TestCase):
    def rhs(self, **kw):
        c = constants(C0=0.3, **kw)
        inp = BoundInput(2, 0.5, SQUARE, np.zeros(SQUARE.size), c)
        quadratic = [eval_thm_quadratic(inp, k).rhs for k in range(1, SQUARE.size)]
        return np.array(quadratic), eval_lower_order_sum(inp)[0].rhs

    def assertIncreasing(self, rows):
        for before, after in zip(rows, rows[1:]):
            self.assertTrue(np.all(after[0] > before[0]))
            self.assertGreater(after[1], before[1])

    def test_increasing_in_delta(self):
        self.assertIncreasing([self.rhs(eps=1.0, delta=d, T0=0.4) for d in (1.0, 1.5, 2.0, 3.0)])

    def test_decreasing_in_eps(self):
        self.assertIncreasing([self.rhs(eps=e, delta=3.0, T0=0.4) for e in (3.0, 2.0, 1.0, 0.5)])

    def test_increasing_in_T0(self):
        self.assertIncreasing([self.rhs(eps=1.0, delta=2.0, T0=t) for t in (0.0, 0.5, 1.0, 2.0)])


class TestExpandingSolitons(unittest.TestCase):
    def test_ball_bound(self):
        self.assertAlmostEqual(expanding_ball_first_bound(2, 1.0, -1.0), PI2 / 32 + 1, delta=1e-15)
        self.assertAlmostEqual(expanding_ball_first_bound(2, 1.0, -1.0), 1.3084, delta=1e-4)
        self.assertAlmostEqual(expanding_ball_first_bound(3, 1.0, -1e-12), 3 * PI2 / 64, delta=1e-11)
        quarter = expanding_ball_first_bound(2, 2.0, -1.0) - 1.0
        self.assertAlmostEqual(quarter, (PI2 / 32) / 4, delta=1e-15)

    def test_ball_reports(self):
        inp = BoundInput(2, 0.0, [6.9, 15.8, 15.8], constants=constants(C0=-1.0))
        first, lower_sum = eval_expanding_ball(inp, 1.0, -1.0)
        self.assertEqual(first.rhs, 6.9)
        self.assertTrue(first.satisfied and lower_sum.satisfied)
        self.assertEqual(lower_sum.rhs, 4.0 * (6.9 - 1.0))
        self.assertTrue(eval_expanding_ball_gap(inp, -1.0).satisfied)

    def test_rejects_shrinking(self):
        inp = BoundInput(2, 0.0, [6.9, 15.8, 15.8], constants=constants(C0=1.0))
        self.assertRaises(BoundInputError, eval_expanding_ball, inp, 1.0, 1.0)

    def test_gap_needs_drifted_laplacian(self):
        sigmas = [6.9, 15.8, 15.8]
        coupled = BoundInput(2, 0.5, sigmas, constants=constants(C0=-1.0))
        self.assertRaises(BoundInputError, eval_expanding_ball_gap, coupled, -1.0)
        anisotropic = BoundInput(2, 0.0, sigmas, constants=constants(eps=2.0, delta=3.0, C0=-1.0))
        self.assertRaises(BoundInputError, eval_expanding_ball_gap, anisotropic, -1.0)
        drifted = BoundInput(2, 0.0, sigmas, constants=constants(T0=0.5, C0=-1.0))
        self.assertRaises(BoundInputError, eval_expanding_ball_gap, drifted, -1.0)

    def test_certifies_C0(self):
        inp = BoundInput(2, 0.0, [6.9, 15.8, 15.8], constants=constants(C0=-2.0))
        self.assertRaises(BoundInputError, eval_expanding_ball, inp, 1.0, -1.0)
        self.assertTrue(eval_expanding_annulus(inp, -1.0).satisfied)


class TestDivergenceFree(unittest.TestCase):
    def test_identity_reduces_to_identity_quadratic(self):
        inp = BoundInput(2, 0.5, SQUARE, np.linspace(0.1, 1.0, SQUARE.size), constants(C0=0.7))
        for k in range(1, SQUARE.size):
            a = eval_divfree_quadratic(inp, k)
            b = eval_identity_quadratic(inp, k)
            self.assertEqual(a.lhs, b.lhs)
            self.assertLessEqual(abs(a.rhs - b.rhs), 1e-13 * abs(b.rhs))

    def test_anisotropic_square(self):
        sigmas = anisotropic_square(9)
        inp = BoundInput(2, 0.0, sigmas, constants=constants(eps=2.0, delta=3.0))
        for k in range(1, 9):
            reports = eval_divfree_suite(inp, k)
            self.assertEqual(len(reports), 5)
            self.assertTrue(all(r.satisfied for r in reports), f"k={k}")

    def test_recursion_matches_level_at_k1(self):
        inp = BoundInput(2, 0.3, SQUARE, constants=constants(eps=1.5, delta=2.0, C0=1.0))
        reports = {r.id: r for r in eval_divfree_suite(inp, 1)}
        level, rec = reports["divfree_sharp_gap_level"], reports["divfree_recursion"]
        self.assertLessEqual(abs(level.rhs - rec.rhs), 1e-12 * abs(level.rhs))

    def test_rejects_divergence(self):
        inp = BoundInput(2, 0.0, SQUARE, constants=constants(T0=0.1))
        self.assertRaises(BoundInputError, eval_divfree_suite, inp, 1)


class TestDiagnostics(unittest.TestCase):
    def test_mode_checks(self):
        reports = eval_mode_checks([2.0, 5.0], [0.5, 1.0], [1.5, 4.0], [1.5, 4.0], 1.0, 1.0)
        self.assertEqual(len(reports), 4)
        self.assertTrue(all(r.satisfied for r in reports))
        bad = eval_mode_checks([2.0], [0.5], [1.0], [1.0], 1.0, 1.0)
        self.assertFalse(bad[0].satisfied)

    def test_oracle_agreement(self):
        reports = eval_oracle_agreement([1.0, 2.004], [1.0, 2.0], tolerance=5e-3)
        self.assertEqual([r.k for r in reports], [1, 2])
        self.assertTrue(all(r.satisfied for r in reports))
        self.assertFalse(eval_oracle_agreement([1.02], [1.0])[0].satisfied)


class TestReports(unittest.TestCase):
    def test_slack(self):
        self.assertTrue(make_report("x", "f", 1, 1.0 + 1e-12, 1.0, 1e-9).satisfied)
        self.assertFalse(make_report("x", "f", 1, 1.0 + 1e-6, 1.0, 1e-9).satisfied)

    def test_csv_and_json(self):
        reports = eval_yang_suite(BoundInput(2, 0.0, SQUARE), 3) + [make_report("x", "f", 2, 3.0, 1.0, 0.0)]
        with tempfile.TemporaryDirectory() as tmp:
            path = write_reports_csv(reports, os.path.join(tmp, "bounds.csv"))
            write_reports_json(reports, os.path.join(tmp, "bounds.json"))
            with open(path, newline="") as f:
                text = f.read()
            self.assertTrue(text.startswith("id,family,k,lhs,rhs,margin,satisfied\n"))
            self.assertNotIn("\r", text)
            self.assertEqual(read_reports_csv(path), reports)


if __name__ == "__main__":
    unittest.main()
