import os

GRAM_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-10
NEGATIVE_TOLERANCE = 1e-12
SUPPORT_CLAMP = 1e-14
MAX_OUTCOMES = 10**8
FLOAT_LP_TOLERANCE = 1e-9
FLOAT_VERIFY_TOLERANCE = 1e-7
BISECTION_XTOL = 1e-12
THRESHOLD_SCAN_POINTS = 1000
MODEL_RESIDUAL_TOLERANCE = 1e-10
SIGN_DIGITS = 60
RANDOM_SEED = 42
DEFAULT_SAMPLES = 100_000
THREADS_ENV = 'QNET_THREADS'


def thread_count() -> int:
  'Worker count for parameter sweeps, read from QNET_THREADS'
  raw = os.environ.get(THREADS_ENV)
  if raw is None:
    return min(8, os.cpu_count() or 1)
  try:
    return max(1, int(raw))
  except ValueError:
    return 1
