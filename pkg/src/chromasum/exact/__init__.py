"""Ground-truth indices for small graphs."""

from chromasum.exact.scan import SCAN_COLUMNS, conjecture_scan, write_scan_csv
from chromasum.exact.solver import ExactResult, exact_index, naive_index
