"""Python toric Oda consts."""

PROP_VERTICES = "vertices"
PROP_RECESSION = "recession"
PROP_RAYS = "rays"
PROP_MAX_CONES = "max_cones"
PROP_FAN = "fan"
PROP_COEFFS = "coeffs"
PROP_TARGET = "target"
PROP_PIECES = "pieces"
PROP_POINTS = "points"

PROP_RECORD_COMMAND = "command"
PROP_RECORD_FAMILY = "family"
PROP_RECORD_DESCRIPTOR = "descriptor"
PROP_RECORD_PAYLOAD = "payload"
PROP_RECORD_MICROS = "micros"
PROP_RECORD_ERROR = "error"

ENV_MAX_CELLS = "ODA_MAX_CELLS"
DEFAULT_MAX_CELLS = 10**6

DEFAULT_JOBS = 1
DEFAULT_MAX_COEFF = 3
DEFAULT_SEED = 0
DEFAULT_NORMALITY_DEPTH = 3

MAX_PICARD_RANK = 3
HILBERT_CHECK_DEGREE = 5

SVG_PRECISION = 4
SVG_SCALE = 40
SVG_MARGIN = 1
SVG_STYLE_TARGET = "fill:none;stroke:black;stroke-width:0.06"
SVG_STYLE_PIECE = "fill:steelblue;fill-opacity:0.25;stroke:steelblue;stroke-width:0.03"
SVG_STYLE_RESIDUAL = "fill:crimson;fill-opacity:0.7;stroke:crimson;stroke-width:0.03"
SVG_STYLE_POINT = "fill:black"
SVG_STYLE_WITNESS = "fill:crimson;stroke:black;stroke-width:0.02"
SVG_POINT_RADIUS = 0.08
