from skelet.core.complex import EdgeEnd, EdgeRecord, SkeletonComplex
from skelet.core.errors import BudgetExceeded, CurveError, MoveError, RegionError, SkelFormatError
from skelet.core.regions import RegionOrbit, compute_regions
from skelet.core.skel_format import parse_skel, serialize
from skelet.core.validator import ValidationReport, boundary_graph_type, counts, validate
