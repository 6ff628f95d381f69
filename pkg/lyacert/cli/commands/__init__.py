from .certify import CertifyCommand
from .moments import MomentsCommand
from .integrate import IntegrateCommand
from .series import SeriesCommand
from .optimize_gozlan import OptimizeGozlanCommand
from .audit import AuditCommand
from .validate import ValidateCommand
