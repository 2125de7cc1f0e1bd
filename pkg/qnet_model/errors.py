class QnetError(Exception):
  'Base class for every error raised by qnet_model'


class DomainError(QnetError, ValueError):
  'A parameter lies outside the range an operation accepts'


class OrthogonalityError(DomainError):
  """A set of vectors that must be orthonormal is not.

  Attributes:
    max_deviation float:
      Largest absolute entry of the Gram matrix minus the identity.
  """

  def __init__(self, message: str, max_deviation: float):
    super().__init__(f'{message} (max Gram deviation {max_deviation:.3e})')
    self.max_deviation = max_deviation


class LabelError(QnetError, KeyError):
  'An outcome label does not belong to the basis it is used with'


class ResourceLimitError(QnetError):
  'A computation would enumerate more outcomes than the configured cap'


class OutcomeSetMismatchError(QnetError, ValueError):
  'Two distributions do not share the same outcome sets'


class CertificateError(QnetError):
  'A feasibility witness or Farkas vector failed re-verification'


class NoSolutionError(QnetError):
  """No model parameters reproduce the target marginals.

  Attributes:
    residual float:
      Largest residual reached by the best candidate, if any.
  """

  def __init__(self, message: str, residual: float | None = None):
    super().__init__(message)
    self.residual = residual
