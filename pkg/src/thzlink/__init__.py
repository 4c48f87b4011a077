"""Link-level simulator for wideband sub-THz multi-user MIMO-OFDM downlinks.

The transmit array is split into non-overlapping subarrays, one RF chain each;
analog beams combine true-time-delay lines with static phase shifters so that
beams stay aligned across a wide band.  The package covers channel synthesis,
max-min fair subarray allocation, the alternating delay/phase solver, the
per-subcarrier digital stage, rate/gain metrics, and a Monte Carlo campaign
driver with CSV export.
"""

__version__ = "0.1.0"

from .allocation import (
    Allocation,
    continuous_allocation,
    discretize_allocation,
    serving_users,
    sum_channel_gains,
    uniform_allocation,
)
from .analog import (
    ALGORITHM1,
    IDEAL,
    AnalogPrecoder,
    SolverOptions,
    SubarraySolution,
    assemble_analog_precoder,
    coupling_tensor,
    delay_update,
    design_analog_precoder,
    ideal_subprecoder,
    optimize_subarray,
    phase_update,
    steering_phase_coeffs,
    subprecoder_vector,
)
from .campaign import (
    SCHEMES,
    CampaignAborted,
    CampaignResult,
    CampaignSpec,
    SchemeResult,
    TrialResult,
    run_campaign,
    run_trial,
    trial_rng,
    write_outputs,
)
from .channel import (
    ChannelRealization,
    channel_matrix,
    rx_array_response,
    subarray_response,
    synthesize_channel,
    tx_array_response,
    write_channel_dump,
)
from .config import (
    SPEED_OF_LIGHT,
    ConfigError,
    SubcarrierGrid,
    SystemConfig,
    TtdGrid,
    build_subcarrier_grid,
    build_ttd_grid,
    load_config,
    quantize_delay,
    to_json_dict,
    validate_config,
)
from .digital import (
    DigitalPrecoder,
    SingularChannelError,
    design_digital_precoder,
    effective_channel,
    effective_channel_tensor,
    matched_precoder,
    max_column_power,
    normalize_power,
    zf_precoder,
)
from .metrics import (
    CdfSeries,
    GainProfile,
    RateReport,
    achievable_rate,
    achievable_rates,
    asymptotic_rate_bounds,
    average_subarray_gain,
    empirical_cdf,
    finite_size_rate_bounds,
    gain_profile,
    min_subarray_objective,
)
