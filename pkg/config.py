
"""
Configuration settings for the corrtaxonomy toolkit.

Every value can be overridden with a ``TAXONOMY_<NAME>`` environment variable
or an entry in a ``.env`` file next to this module.
"""
import os

from dotenv import load_dotenv

load_dotenv(os.path.join(os.path.dirname(__file__), ".env"))


def _env(name: str, default: str) -> str:
    return os.getenv(f"TAXONOMY_{name}", default)


# Data Directory Configuration
DATA_DIRECTORY = _env("DATA_DIRECTORY", os.path.join(os.path.dirname(__file__), "data"))
EXAMPLE_DATASET = os.path.join(DATA_DIRECTORY, "example_prices.csv")
OUTPUT_DIRECTORY = _env("OUTPUT_DIRECTORY", "results")

# Ingest Configuration
DATE_COLUMN = _env("DATE_COLUMN", "DATE")
DEFAULT_TAU = int(_env("DEFAULT_TAU", "1"))  # months
DEFAULT_MISSING_POLICY = _env("DEFAULT_MISSING_POLICY", "listwise")

# Analysis Configuration
DEFAULT_LINKAGE = _env("DEFAULT_LINKAGE", "both")
DEFAULT_REPLICAS = int(_env("DEFAULT_REPLICAS", "1000"))
DEFAULT_SEED = int(_env("DEFAULT_SEED", "0"))
BOOTSTRAP_WORKERS = int(_env("BOOTSTRAP_WORKERS", "4"))
MAX_BRUTE_FORCE_NODES = 8

# Export Configuration
DEFAULT_FORMATS = _env("DEFAULT_FORMATS", "dot,json,newick,csv")
MATRIX_SIGNIFICANT_DIGITS = 17
RELIABILITY_DISPLAY_DECIMALS = 2

# Logging Configuration
LOG_LEVEL = _env("LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
