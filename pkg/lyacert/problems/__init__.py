from lyacert.problems.errors import ProblemFileError
from lyacert.problems.base import CertificateReport, Problem, ValidationResult
from lyacert.problems.diffusion import DiffusionCertification
from lyacert.problems.unbounded import UnboundedCertification
from lyacert.problems.jump import JumpCertification
from lyacert.problems.gozlan import GozlanCertification
