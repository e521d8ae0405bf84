"""Exact limit laws of block-modified Wishart matrices for partition-built maps."""

from easywishart.classify import (
    closed_form_generalized_moment,
    easy_case_eligible,
    is_symmetric,
    is_unital_mod_scalars,
    predict_limit_law,
    symmetric_components,
)
from easywishart.easy_maps import (
    ChoiMatrix,
    LinearBlockMap,
    apply_block_modification,
    builtin_map,
    choi_from_map,
    easy_choi,
    map_from_choi,
    tensor_map,
    twisted_choi,
    twisted_tensor_map,
)
from easywishart.estimators import BlockModifier, LimitLawPredictor, StarMomentTransformer
from easywishart.free_poisson import (
    CompoundFreePoissonLaw,
    asymptotic_limit,
    bessel_limit,
    compound_from_choi,
    compound_moments,
    free_bessel,
    marchenko_pastur,
)
from easywishart.moments import (
    generalized_star_moment,
    is_multiplicative,
    law_moments,
    spectral_atoms,
    trace_star_moment,
)
from easywishart.partitions import Partition, enumerate_partitions, parse_partition
from easywishart.permutations import Permutation
from easywishart.tables import AtomicMeasure, MomentTable
from easywishart.wishart import WishartConfig, convergence_report, empirical_star_moments

__version__ = "0.1.0"
