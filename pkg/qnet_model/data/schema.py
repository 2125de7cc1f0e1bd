class DistributionSchema:
  PARTY = "a{}"
  PROBABILITY = "probability"
  OUTCOMES = "outcomes"
  OUTCOME = "outcome"


class SampleSchema:
  INDEX = "sample"
  PARTY = "a{}"


class ThresholdSchema:
  LAMBDA0_SQ = "lambda0_sq"
  U_MAX_SQ = "u_max_sq"
  U_MAX = "u_max"
  STATUS = "status"
  FOUND = "threshold"
  NO_THRESHOLD = "no_threshold"


class ScenarioSchema:
  N = "n"
  SOURCES = "sources"
  MEASUREMENT = "measurement"
  MEASUREMENTS = "measurements"
  KIND = "kind"
  BASIS = "basis"
  N_PARTIES = "n_parties"
  U = "u"
  U_SQ = "u2"
  LAMBDA0_SQ = "lambda02"
  ETA_UP = "eta_up"
  ETA_DOWN = "eta_down"
  SCHMIDT_SQUARES = "schmidt_squares"
  EIGENSTATES = "eigenstates"
  LABELS = "labels"
  COARSE = "coarse"
  QUBIT = "qubit"
  QUTRIT = "qutrit"
  CUSTOM = "custom"


class ReportSchema:
  SCENARIO = "scenario"
  VERDICT = "verdict"
  CERTIFIED = "nonlocality_certified"
  CONSISTENT = "consistent_with_local"
  SUPPORT = "support_constraints"
  SUPPORT_HOLDS = "holds"
  MAX_DEVIATION = "max_deviation"
  VIOLATIONS = "violations"
  FINNER = "finner"
  MIN_SLACK = "min_slack"
  ARGMIN = "argmin"
  LP = "marginal_problem"
  TITLE = "title"
  STATUS = "status"
  EXACT = "exact"
  PIVOTS = "pivots"
  WITNESS = "witness"
  FARKAS = "farkas"
  INEQUALITY = "marginal_inequality_lhs"
  FORCED = "forced_solution"
  M1 = "m1"
  M2 = "m2"
  NEGATIVE = "negative_entries"
  NAME = "name"
  EXPECTED = "expected"
  OBSERVED = "observed"
  DEVIATION = "deviation"


class ModelSchema:
  KIND = "kind"
  N_PARTIES = "n_parties"
  LABELS = "labels"
  SOURCES = "sources"
  HIDDEN = "hidden"
  WEIGHTS = "weights"
  RESPONSES = "responses"
  LEFT = "left"
  RIGHT = "right"
  OUTPUT = "output"
  PARAMETERS = "parameters"
  TOTAL_VARIATION = "total_variation"
  RESIDUALS = "max_residual"
  SAMPLES = "samples"
  SEED = "seed"


class PrintSchema:
  NORMALIZATION = 'Sum of probabilities'
  SUPPORT = 'Outcomes with nonzero probability'
  OUTCOMES = 'Outcomes'
  CERTIFIED = 'Nonlocality certified'
  CONSISTENT = 'No certificate found; consistent with a local model'
  TOTAL_VARIATION = 'Total variation distance to the quantum distribution'
  EMPIRICAL = 'Total variation of the samples to the quantum distribution'
  THRESHOLD_ROWS = 'Threshold rows'
  NO_SOLUTION = 'No model solution'
