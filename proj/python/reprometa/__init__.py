"""Meta-analysis of 2x2 trials: finite-sample confidence intervals for the
common odds ratio, with Mantel-Haenszel and Peto baselines."""

from ._reprometa import (  # noqa: F401
    EmptyConfidenceSetError,
    EstimateCI,
    MetaDataset,
    MetaError,
    NuclearEval,
    ParseError,
    ReproResult,
    StudyTable,
    UndefinedEstimate,
    ValidationError,
    __version__,
    builtin_dataset,
    eta_initial_values,
    load_dataset_csv,
    mh_confidence_interval,
    mh_log_odds_ratio,
    peto_log_odds_ratio_ci,
    repro_confidence_interval,
    run_coverage_study,
    strip_zero_total,
    surrogate_trial_roster,
    theta_grid,
    validate_dataset,
    w_statistic,
    zero_total_comparison,
)
