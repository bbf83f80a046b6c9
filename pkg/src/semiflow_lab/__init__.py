"""Exact-arithmetic laboratory for sensitivity counterexamples of interval cascades."""
from .cascade import (
    FULL, LayoutCascade, ProductCascade, StepBudgetExceeded, TrackedSet, diameter_sweep, image_diameter,
    iterate, make_cascade, make_product, product_diameter, restrict_to_submonoid, stepwise_oracle,
)
from .claims import CLAIM_IDS, ClaimReport, catalog, verify_claim
from .exact import (
    BudgetExceeded, Inconclusive, Rational, Tower, TowerSum, bit_budget, pow2, rational, rational_arith,
)
from .index_sets import BlockFamily, BlockFamilySet, Classification, RangeSet, classify, duality_check, set_algebra
from .intervals import ClosedInterval, EmptySet, IntervalUnion, affine_image, diameter
from .layout import GrowthParams, PointOutsideSpace, SpaceLayout, interval_at, length_at, level_ranges, preset_layout
from .sensitivity import (
    NoWitnessFound, SensitivityVerdict, classify_notion, multi_sensitive_check, n_set,
    non_sensitivity_witness, product_n_set,
)

__version__ = "0.1.0"
