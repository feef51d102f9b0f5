"""Simulator and analysis library for helper-assisted jamming on the
Gaussian wiretap channel: lattice decoding, mixture-entropy information
measures, and reproducible power-sweep experiments."""

__version__ = "0.1.0"

from .channel import (
    ChannelRealization,
    PowerBudget,
    default_budget,
    empirical_power,
    eve_output,
    legit_output,
    sample_channel,
)
from .constellation import (
    DegenerateLatticeError,
    DminStudy,
    LatticeSizeError,
    PamConstellation,
    ReceiverLattice,
    build_receiver_lattice,
    fit_dmin_exponent,
    min_distance,
    nearest_point,
    pam_points,
)
from .experiments import (
    ComparisonReport,
    SweepRow,
    compare_schemes,
    fit_dof,
    leakage_slope,
    sweep_power,
    sweep_ser,
)
from .infometrics import (
    MiEstimate,
    MixtureSpec,
    RateBound,
    gaussian_wiretap_capacity,
    mi_discrete_input,
    mixture_entropy,
    rate_lower_bound,
)
from .receiver import (
    ErrorEstimate,
    decode_legit,
    estimate_eve_u_error,
    estimate_ser,
    eve_decode_u_given_v,
)
from .schemes import (
    SchemeConfig,
    TransmitBlock,
    encode,
    make_blind_scheme,
    make_csi_scheme,
    make_gaussian_jam_scheme,
    sample_symbols,
    schedule_q,
)
