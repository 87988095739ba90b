"""Grand Morrey norms and integral operators on finite quasi-metric measure spaces."""

__version__ = "0.1.0"

from .space import (  # noqa: E402
    Space,
    RegularityReport,
    build_space,
    verify_quasimetric,
    ball_measure,
    radius_set,
    estimate_doubling,
    estimate_ahlfors,
    estimate_reverse_doubling,
    regularity,
    generate,
    gen_interval,
    gen_cube,
    gen_cantor,
    gen_random,
    snowflake,
    load_space,
    save_space,
)
from .norms import (  # noqa: E402
    GrandParams,
    MorreyParams,
    epsilon_grid,
    lebesgue_norm,
    lp_ball_norm,
    morrey_norm,
    grand_morrey_norm,
    grand_lebesgue_norm,
)
from .operators import (  # noqa: E402
    KernelSpec,
    PowerModulus,
    TableModulus,
    maximal,
    fractional_maximal,
    potential_I,
    potential_T,
    cz_apply,
    cz_adjoint,
    hilbert_kernel,
    kernel_check,
)
from .constants import paper_constant  # noqa: E402
from .report import CheckResult, Report, emit_report, parse_report  # noqa: E402
from .analysis import (  # noqa: E402
    SobolevParams,
    check_embeddings,
    check_sigma_split,
    check_hedberg,
    estimate_operator_norm,
    gen_test_family,
    calibrate_c0,
    verify_theorem,
)
