"""Wideband mmWave IRS-aided OFDMA simulator exploiting the beam-split effect."""

__version__ = "0.1.0"

from .channel import (  # noqa: F401
    FadingDraw,
    LinkCommon,
    SystemParams,
    UserGeometry,
    UserTerminal,
    channel_gain,
    channel_response,
    sample_users,
    steering_vector,
    subcarrier_frequencies,
    subcarrier_frequency,
)
from .irs import PhaseConfig, beamsplit_gain_profile, optimal_phases, random_config  # noqa: F401
from .numerics import (  # noqa: F401
    ProductNormalCdf,
    bessel_k1,
    dirichlet_gain,
    lk_approximation,
    product_normal_cdf,
    product_normal_quantile,
    sinc,
)
from .scheduling import (  # noqa: F401
    CampaignResult,
    GainMatrix,
    ScheduleDecision,
    run_campaign,
    schedule_max_rate,
    schedule_round_robin,
    slot_throughput,
)
from .theory import (  # noqa: F401
    SuccessEstimate,
    SuccessEvent,
    estimate_success_probability,
    jensen_throughput,
    k_min,
    predicted_throughput,
    success_probability_bound,
)
