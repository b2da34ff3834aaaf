'''toolkit_constants.py'''

from enum import Enum


'''
----------------------
General Toolkit Constants
----------------------
'''

class FactorKind(Enum):
  '''One-parameter subgroups and Weyl representatives that build GL_n words'''
  def __init__(self, kind_name: str, takes_argument: bool, unipotent: bool):
    self.__kind_name = kind_name
    self.__takes_argument = takes_argument
    self.__unipotent = unipotent

  @property
  def kind_name(self): return self.__kind_name
  @property
  def takes_argument(self): return self.__takes_argument
  @property
  def unipotent(self): return self.__unipotent

  X = ("x", True, True)
  Y = ("y", True, True)
  X_NEG = ("x_neg", True, False)
  TORUS = ("torus", True, False)
  SBAR = ("sbar", False, False)
  SDOT = ("sdot", False, False)


class VertexKind(Enum):
  STAR = "star"
  DOT = "dot"


class ArrowKind(Enum):
  '''vertical arrows point up, horizontal arrows point left (Q_P orientation)'''
  VERTICAL = "vertical"
  HORIZONTAL = "horizontal"


class Chart(Enum):
  def __init__(self, chart_name: str, coordinate_prefix: str, trop_prefix: str):
    self.__chart_name = chart_name
    self.__coordinate_prefix = coordinate_prefix
    self.__trop_prefix = trop_prefix

  @property
  def chart_name(self): return self.__chart_name
  @property
  def coordinate_prefix(self): return self.__coordinate_prefix
  @property
  def trop_prefix(self): return self.__trop_prefix

  STRING = ("string", "z", "zeta")
  IDEAL = ("ideal", "m", "mu")


class FrozenMeta(type):
  '''cannot edit toolkit constants check'''
  def __setattr__(cls, name, value):
    raise AttributeError(f"Cannot edit constants '{name}' in ToolkitConstants")

class ToolkitConstants(metaclass = FrozenMeta):
  #relative precision used when dividing by an exact non-monomial series
  DEFAULT_TRUNCATION = 6

  #braid graphs of w0 words explode past this
  BRAID_BFS_MAX_N = 6

  MAX_FILLING_N = 7
  VERTEX_ENUM_MAX_DIM = 4

  #numeric critical point
  DEFAULT_T0 = 1e-3
  TOEPLITZ_RTOL = 1e-8
  NEWTON_TOL = 1e-12
  NEWTON_MAX_STEPS = 200
  CONTINUATION_STEPS = 24

  #valuations are reconstructed with denominators <= factor * n
  VALUATION_DENOMINATOR_FACTOR = 2

  #variable names of the standard coordinate fields
  HIGHEST_WEIGHT_PREFIX = "d"
  TROPICAL_LAMBDA_PREFIX = "lambda"
  SERIES_VARIABLE = "t"

  #reproduction case files, relative to the repository root
  CASES_DIR = "cases"
  CASE_SETS = ("dim3", "dim4", "tables", "f256", "intro")
