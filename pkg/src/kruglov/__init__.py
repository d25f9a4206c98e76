"""Fixed-point sums of uniform permutations, compound Poisson(1) laws,
rearrangement-invariant norms on [0, 1], and inequality checks built on them."""

from .dist import (
    DiscreteDistribution,
    ccdf,
    char_fn,
    convolve,
    delta,
    law_of,
    mean,
    mixture,
    power_convolve,
    prune,
    quantile,
    scale_values,
    tau_grid,
)
from .exactnum import ExactRational, as_rational, binomial, derangements, factorial, format_rational, parse_rational
from .operators import (
    a_n_matrix_dist,
    h_m_dist,
    kruglov_dist,
    kruglov_iterate,
    repeat_vector,
    subset_sum_table,
    support_iteration,
    t_n_bruteforce,
    t_n_dist,
    t_n_stepfn,
)
from .spaces import (
    ConcaveGauge,
    OrliczYoungFunction,
    build_epsilon_gauge,
    check_gauge,
    kruglov_criterion,
    norm_explog,
    norm_l1,
    norm_linf,
    norm_lorentz,
    norm_marcinkiewicz,
    norm_orlicz,
    triple_log_gauge,
    parse_gauge,
    power_gauge,
)
from .stepfn import (
    StepFunction,
    add_rearranged,
    average_vector,
    constant,
    dilate,
    equimeasurable,
    from_vector,
    indicator,
    rearrange,
    scale,
    submajorizes,
)

__version__ = "0.1.0"
