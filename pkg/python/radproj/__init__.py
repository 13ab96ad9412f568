# -*- coding: utf-8 -*-

# This code is part of radproj.
#
# (C) Copyright 2026 The radproj authors. All Rights Reserved.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""radproj python package

Sharp, sparsity-aware moment and tail bounds for Rademacher random
projections, exact brute-force oracles for the underlying chaos, and a
Monte Carlo harness for empirical comparisons.
"""

from logging import getLogger

from .config import Settings
from .majorization import WeightProfile, flatten, majorizes, robin_hood
from .moments import (
    ChaosMomentTable,
    DistortionMomentTable,
    chaos_extreme_moment,
    chaos_extreme_moment_scaled,
    distortion_moment,
    gaussian_moment,
    khintchine_moment,
    rademacher_sum_moment,
    sparse_distortion_moment,
)
from .partitions import Partition, partitions
from .oracle import DiscreteLaw, chaos_law, distortion_law, moment, tail
from .bounds import (
    CurveMethod,
    TailCurve,
    achlioptas_bound,
    compare_curves,
    nogo_lower_curve,
    sharp_tail_bound,
    subgamma_bound,
)
from .projections import (
    DistortionSample,
    Scheme,
    SignMatrix,
    dataset_distortion_sweep,
    distortion,
    empirical_ccdf,
    sample_matrix,
)

logger = getLogger("radproj")
