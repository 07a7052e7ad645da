"""Exact characteristic-number computations for immersions and generic maps.

Multiple-point manifolds of immersions, Thom polynomials of the Sigma^1 and
Sigma^2 strata with their product formulas, and the rational cobordism ring
of Morin maps, all over exact Q or F_2 arithmetic on finite cohomology models.
"""

from .algebra import (
    AlgebraElement,
    Field,
    GradedAlgebra,
    LinearMap,
    build_truncated_poly,
    cross,
    mul,
    pair,
    render_element,
    sphere_model,
    tensor,
)
from .charclass import (
    BetaSeries,
    BundleData,
    Kind,
    SpaceModel,
    TotalClass,
    beta_of,
    product_space,
    series_mul,
    series_pushpull,
    series_scale,
    series_sub,
    stable_inverse,
    whitney_sum,
)
from .cobordism import VOID, CobordismClass, class_product, cobordant, manifold_class, normal_numbers
from .errors import IdentityCheckError, InvariantError, ModelError
from .morin import MorinClass, morin_add, morin_mul, morin_rank, prim_strata
from .multipoint import (
    GeneralMapData,
    ImmersionData,
    euler_locus,
    herbert_step,
    multipoint_numbers,
    multipoint_series,
    product_double_points,
    product_immersion_multipoint,
)
from .singularity import MapData, sigma1_product, sigma2_product, suspend, thom_sigma1, thom_sigma2

__version__ = "0.1.0"
