# Numeric tolerances
ARGMIN_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-9
CACHE_TOLERANCE = 1e-9
REDUCTION_EPSILON = 1e-12  # entropy reductions at or below this count as zero

# Stratification
DEFAULT_MAX_ROUNDS = 12
MIN_MAX_ROUNDS = 3
MIN_AUTO_HEIGHT = 3

# Oracle enumeration bounds (leaf counts)
MAX_BINARY_LEAVES = 9
MAX_MULTIFURCATING_LEAVES = 7

# HSBM
HSBM_MIN_CLUSTER_SIZE = 2

# Edge-list format
COMMENT_PREFIXES = ("#",)

# Tree document
TREE_DOCUMENT_VERSION = 1

# CSV layouts
TRACE_COLUMNS = ["t", "delta_H", "second_difference", "chosen_level"]
SPARSITY_COLUMNS = ["t", "level", "sparsity"]
NMI_COLUMNS = ["level", "nmi", "tree_blocks", "truth_blocks"]

# Output file names
TREE_FILE = "tree.json"
COSTS_FILE = "costs.txt"
TRACE_FILE = "trace.csv"
SPARSITY_FILE = "sparsity.csv"
CONFIG_ECHO_FILE = "config.json"
GRAPH_FILE = "graph.edges"
TRUTH_FILE = "truth.json"
SPEC_ECHO_FILE = "spec.json"
METRICS_FILE = "metrics.txt"
NMI_FILE = "nmi.csv"
ARGMIN_FILE = "argmin.txt"
