"""Regime-switching traffic flow forecasting.

Hidden (semi-)Markov regime inference over flow fluctuations, hybrid
LSTM forecasters conditioned on the latent-state probabilities, and an
autoregressive HMM baseline. The heavy lifting lives in the compiled
extension; this package only re-exports it.
"""

from regimecast._core import (
    ArHmmModel,
    Forecaster,
    HsmmModel,
    SeriesBundle,
    fit_ar_hmm,
    fit_hmm,
    information_criteria,
    load_flow_csv,
    log_likelihood,
    make_bundle,
    metrics,
    state_posteriors,
    synthesize,
    train_forecaster,
    viterbi,
    write_flow_csv,
)

__all__ = [
    "ArHmmModel",
    "Forecaster",
    "HsmmModel",
    "SeriesBundle",
    "fit_ar_hmm",
    "fit_hmm",
    "information_criteria",
    "load_flow_csv",
    "log_likelihood",
    "make_bundle",
    "metrics",
    "state_posteriors",
    "synthesize",
    "train_forecaster",
    "viterbi",
    "write_flow_csv",
]

__version__ = "0.1.0"
