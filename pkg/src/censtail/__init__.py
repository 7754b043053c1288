"""censtail: tail index estimation for right-censored Pareto-type data."""

from .api import TailIndexEstimator, check_censored_data
from .asymptotics import (
    AsymptoticParams,
    CiResult,
    bw_variance,
    confidence_interval,
    mu_beta,
    normal_quantile,
    sigma2_beta,
    variance_gap_bw,
    variance_gap_mns,
)
from .estimators import (
    AllCensoredTailError,
    BetaRangeWarning,
    DegenerateEstimateError,
    EstimatePath,
    EstimatorSpec,
    bw,
    box_cox,
    efg,
    evaluate,
    evaluate_grid,
    hill,
    mns_na,
    p_hat,
    path,
    weighted_km,
    weighted_na,
    worms_km,
)
from .io import ConfigError, DataError, ingest, load_run_config
from .kselect import KSelectConfig, KSelectResult, NoAdmissibleKError, reiss_thomas
from .montecarlo import McConfig, McSummary, figure_table, format_table, parse_table, run
from .sampling import (
    Burr,
    CensoringScenario,
    Frechet,
    ModifiedPareto,
    Pareto,
    Seed,
    generate,
    matched_censor,
    model_from_dict,
    model_to_dict,
    solve_censor_index,
)
from .survival import (
    CensoredSample,
    RankedSample,
    SurvivalCurve,
    km_curve,
    km_na_divergence,
    na_curve,
    rank,
    tail_ratio,
)

__version__ = "0.1.0"
