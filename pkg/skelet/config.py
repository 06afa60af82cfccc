import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base Directory (Parent of skelet/)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Data Directories
DATA_DIR = os.getenv('SKELET_DATA_DIR', os.path.join(BASE_DIR, "data"))
CENSUS_DIR = os.path.join(DATA_DIR, "census")
REPORT_DIR = os.path.join(DATA_DIR, "reports")

# Files
ONE_TET_CENSUS = os.path.join(CENSUS_DIR, "one_tet_census.csv")

# Logging
LOG_LEVEL = os.getenv('SKELET_LOG_LEVEL', 'INFO').upper()
LOG_FILE = os.getenv('SKELET_LOG_FILE')

# Search defaults (flags override)
MAX_DEPTH = int(os.getenv('SKELET_MAX_DEPTH', '6'))
MAX_NODES = int(os.getenv('SKELET_MAX_NODES', '1000000'))
MAX_SECONDS = float(os.getenv('SKELET_MAX_SECONDS', '300'))
JOBS = int(os.getenv('SKELET_JOBS', '1'))

# Curve enumeration for CR/T sites
T_CROSSINGS = int(os.getenv('SKELET_T_CROSSINGS', '3'))
MAX_CURVES = int(os.getenv('SKELET_MAX_CURVES', '5000'))

# Super-standardization budget: BUDGET_FACTOR * V + BUDGET_BASE search expansions
BUDGET_FACTOR = int(os.getenv('SKELET_BUDGET_FACTOR', '10'))
BUDGET_BASE = int(os.getenv('SKELET_BUDGET_BASE', '100'))

# Exit codes
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3
