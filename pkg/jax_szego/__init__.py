# every kernel works in double precision
import jax

jax.config.update("jax_enable_x64", True)

# Exception and Warning classes
from .errors import SzegoError, SzegoValueError, SzegoRangeError  # noqa: E402
from .errors import SzegoIncompatibleValuesError, SzegoNotImplementedError  # noqa: E402
from .errors import SzegoConvergenceError, SzegoDegenerateError  # noqa: E402
from .errors import SzegoWarning  # noqa: E402

# Numerical settings
from .params import SzegoParams  # noqa: E402

# Partial sums
from .series import (  # noqa: E402
    GrowthSpec,
    FunctionFamily,
    PartialSumPoly,
    FAMILY_NAMES,
    make_family,
    family_from_config,
    coefficient,
    partial_sum,
    series_value,
    eval_surrogate,
)
from .rootfind import RootSet, all_roots, companion_roots, vieta_check  # noqa: E402

# Limit curve and predictions
from .curve import CurveSample, phi, tau, trace, classify, curve_distance  # noqa: E402
from .predict import (  # noqa: E402
    ArcPoint,
    PredictionRecord,
    APPLICATION_PRESETS,
    arc_point,
    arc_constant,
    arc_predicted_zeros,
    arc_band_predictions,
    corner_predicted_zeros,
    kkmm_refined_zero,
    corrected_parabola,
    width_disk_count,
    exterior_approach_coefficient,
)

# Checks and reports
from .harness import MatchReport, RateFit, match, rate_fit, run_pipeline  # noqa: E402

# packages kept separate
from . import laplace  # noqa: E402
from . import core  # noqa: E402
