import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from cbnoma.channel import SystemParams

# Reference scenario used throughout: 0 dB / -10 dB gains, 10 dB / 0 dB targets.
BETA1 = 1.0
BETA2 = 0.1
GAMMA1 = 10.0
GAMMA2 = 1.0


def reference_params(m=8, rho_th_sq=0.02):
    return SystemParams(m=m, beta1=BETA1, beta2=BETA2, gamma1=GAMMA1,
                        gamma2=GAMMA2, rho_th=math.sqrt(rho_th_sq))


@pytest.fixture
def fig1_params():
    return reference_params()
