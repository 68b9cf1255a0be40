import logging
import unittest

from mubwit_globals import GROUP_WITNESSES, GROUP_DECOMPOSITIONS
from mubwit_helper_classes import DomainError
from mubwit_recipes import RECIPES, run_recipe, reference_reproductions


class TestRecipes(unittest.TestCase):
    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def assert_recipe_passes(self, name):
        checks = run_recipe(name)
        self.assertTrue(checks)
        failed = [check for check in checks if not check.passed]
        self.assertEqual(failed, [])

    def test_names(self):
        self.assertEqual(
            list(RECIPES),
            [
                "s0-collapse",
                "prop1",
                "thm1-obstruction",
                "d3-all",
                "d4-appendix",
                "fourier-pair",
                "half-shift",
                "separable-bound",
            ],
        )

    def test_unknown_recipe(self):
        with self.assertRaises(DomainError) as ctx:
            run_recipe("d5-all")
        self.assertIn("half-shift", str(ctx.exception))

    def test_s0_collapse(self):
        self.assert_recipe_passes("s0-collapse")

    def test_bell_witness_values(self):
        self.assert_recipe_passes("prop1")

    def test_obstruction(self):
        self.assert_recipe_passes("thm1-obstruction")

    def test_d3(self):
        self.assert_recipe_passes("d3-all")

    def test_d4(self):
        self.assert_recipe_passes("d4-appendix")
        names = [check.name for check in run_recipe("d4-appendix")]
        self.assertIn("rho_b^G = rho_b over the grid", names)

    def test_fourier_pair(self):
        self.assert_recipe_passes("fourier-pair")

    def test_half_shift(self):
        self.assert_recipe_passes("half-shift")

    def test_separable_bound(self):
        checks = run_recipe("separable-bound")
        self.assertEqual([check for check in checks if not check.passed], [])
        measured = {check.name: check.measured for check in checks}
        # m runs over 1..d + 1 for each d and s: 2 * (4 + 6) witnesses
        self.assertEqual(sum(name.endswith("random product states") for name in measured), 20)
        self.assertAlmostEqual(measured["d=5 m=6 s=0 see-saw reaches 2"], 2.0, places=6)
        self.assertAlmostEqual(measured["d=3 m=1 s=0 see-saw <= (d+m-1)/d"], 1.0, places=9)

    def test_reproductions(self):
        entries = list(reference_reproductions())
        names = {(group, name) for group, name, _, _ in entries}
        self.assertIn((GROUP_WITNESSES, "W_012"), names)
        self.assertIn((GROUP_WITNESSES, "W_unext"), names)
        self.assertIn((GROUP_DECOMPOSITIONS, "00_A"), names)
        self.assertEqual(len(names), len(entries))
