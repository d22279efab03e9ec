"""Collaborative spam mitigation over social trust.

Thin Python surface over the C++ core: social-graph construction, SybilLimit-
style identity scoring, trust-weighted report aggregation, the Ostra credit
baseline, and the discrete-event simulator.
"""

from ._core import (  # noqa: F401
    ConfigError,
    DomainError,
    OstraCredit,
    OstraVerdict,
    ParseError,
    ReportRepository,
    SocialGraph,
    SpammerReport,
    SybilLimitParams,
    SybilRegionSpec,
    SybilTopology,
    TrustGraph,
    __version__,
    aggregate_reports,
    attach_sybil_region,
    compute_identity_uniqueness,
    decide_block,
    default_config,
    is_spammer,
    report_similarity,
    run_experiment,
    run_simulation,
    simulation_csv,
    summarize,
    update_direct_trust,
)
