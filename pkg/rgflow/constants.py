RGDS_MAGIC = b"RGDS"
RGDS_VERSION = 1
RBMW_MAGIC = b"RBMW"
RBMW_VERSION = 1
IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
VALUE_RANGE_SPIN = "spin"
VALUE_RANGE_REAL = "real"
VALUE_RANGE_TAGS = {VALUE_RANGE_SPIN: 0, VALUE_RANGE_REAL: 1}
LUMA_WEIGHTS = (0.299, 0.587, 0.114)
PIXEL_MAX = 255.0
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3
EXIT_NUMERIC_ERROR = 4
ORTHONORMALITY_TOLERANCE = 1e-8
IMAGINARY_TOLERANCE = 1e-8
SYMMETRY_TOLERANCE = 1e-8
ALIGNMENT_THRESHOLDS = (0.8, 0.5, 0.1)
DEFAULT_EIGEN_FLOOR = 0.01
DEFAULT_STABILITY_THRESHOLD = 0.8
DEFAULT_GROWTH_FRACTION = 0.1
DEFAULT_FULL_RANK_FRACTION = 0.5
DEFAULT_ISING_TEMPERATURE = 4.0
DEFAULT_ISING_COUPLING = 1.0
DEFAULT_BURN_IN_SWEEPS = 1000
DEFAULT_SWEEPS_PER_SAMPLE = 10
DEFAULT_BLOCK_STRIDE = 2
DEFAULT_RGM_BLOCK_SIZE = 4
DEFAULT_RGM_GAIN = 1.0
REFERENCE_ALPHA = 10
REFERENCE_VISIBLE_SIDE = 80
MODE_COLLAPSE_TOLERANCE = 1e-12
BANNER = '================================================'
VERDICT_STABLE = "stable"
VERDICT_UNSTABLE = "unstable"
VERDICT_TRIVIALLY_STABLE = "trivially_stable"
