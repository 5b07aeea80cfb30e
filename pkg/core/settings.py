"""
Django settings for the CAGVRP solver suite
Branch-and-cut, GTSP transformation, oracle and batch tooling
"""

from pathlib import Path
from decouple import config

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent

# Security Settings
SECRET_KEY = config('SECRET_KEY', default='django-insecure-cagvrp-local-only')
DEBUG = config('DEBUG', default=True, cast=bool)
ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1').split(',')

# Application definition
INSTALLED_APPS = [
    # Django apps
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Solver suite apps
    'instances',
    'formulation',
    'lp',
    'separation',
    'tsp',
    'verification',
    'transform',
    'gtsp',
    'oracle',
    'bnc',
    'cli',
]

# Database Configuration
# Nothing is persisted; the test runner still needs a configured alias
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'cagvrp.sqlite3')),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Configuration (serializers/renderers only, no views)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COERCE_DECIMAL_TO_STRING': False,
}


# ============================================================================
# SOLVER CONFIGURATION
# ============================================================================

# Every comparison in the suite goes through these values
SOLVER_TOLERANCES = {
    'feasibility': config('TOL_FEASIBILITY', default=1e-7, cast=float),
    'integrality': config('TOL_INTEGRALITY', default=1e-6, cast=float),
    'cut_violation': config('TOL_CUT_VIOLATION', default=1e-4, cast=float),
    'support': config('TOL_SUPPORT', default=1e-6, cast=float),
    'comparison': config('TOL_COMPARISON', default=1e-6, cast=float),
}

INSTANCE_SETTINGS = {
    'grid_size': config('INSTANCE_GRID_SIZE', default=100.0, cast=float),
    'communication_range': config('INSTANCE_RANGE', default=25.0, cast=float),
    'cluster_size': config('INSTANCE_CLUSTER_SIZE', default=10, cast=int),
    'cluster_separation': config('INSTANCE_CLUSTER_SEPARATION', default=30.0, cast=float),
    'cluster_sigma': config('INSTANCE_CLUSTER_SIGMA', default=5.0, cast=float),
    'big_factor': config('INSTANCE_BIG_FACTOR', default=10.0, cast=float),
}

LP_SETTINGS = {
    'backend': config('LP_BACKEND', default='simplex'),
    'bland_after_degenerate': config('LP_BLAND_AFTER', default=1000, cast=int),
    'iteration_factor': config('LP_ITERATION_FACTOR', default=50, cast=int),
    'refactor_every': config('LP_REFACTOR_EVERY', default=50, cast=int),
}

BNC_SETTINGS = {
    'time_limit': config('BNC_TIME_LIMIT', default=600.0, cast=float),
    'node_limit': config('BNC_NODE_LIMIT', default=100000, cast=int),
    'max_cut_rounds': config('BNC_MAX_CUT_ROUNDS', default=20, cast=int),
    'max_cuts_per_round': config('BNC_MAX_CUTS_PER_ROUND', default=50, cast=int),
    'workers': config('BNC_WORKERS', default=1, cast=int),
}

TSP_SETTINGS = {
    'held_karp_max_nodes': config('TSP_HELD_KARP_MAX', default=13, cast=int),
}

GTSP_SETTINGS = {
    'iterations_per_set': config('GTSP_ITERATIONS_PER_SET', default=2000, cast=int),
    'removal_fraction': config('GTSP_REMOVAL_FRACTION', default=0.3, cast=float),
    'seed': config('GTSP_SEED', default=0, cast=int),
    # Wall-clock cap for LNS; runs that hit it are no longer seed-reproducible
    'time_limit': config('GTSP_TIME_LIMIT', default=60.0, cast=float),
    'reselection_sweeps': config('GTSP_RESELECTION_SWEEPS', default=2, cast=int),
    'exact_max_sets': config('GTSP_EXACT_MAX_SETS', default=8, cast=int),
    'exact_max_product': config('GTSP_EXACT_MAX_PRODUCT', default=1000000, cast=int),
}

ORACLE_SETTINGS = {
    'max_targets': config('ORACLE_MAX_TARGETS', default=8, cast=int),
}

# Enables the long test sweeps: exact solves at n = 12, heuristic gaps at n = 20, heuristic runtime at n = 80
RUN_SLOW_TESTS = config('RUN_SLOW_TESTS', default=False, cast=bool)

# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'class': 'logging.FileHandler',
            'filename': BASE_DIR / 'logs' / 'cagvrp.log',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': config('LOG_LEVEL', default='WARNING'),
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': config('LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        'bnc': {
            'handlers': ['console', 'file'],
            'level': config('BNC_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
        'gtsp': {
            'handlers': ['console', 'file'],
            'level': config('GTSP_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
        'lp': {
            'handlers': ['file'],
            'level': config('LP_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        'cli': {
            'handlers': ['console', 'file'],
            'level': config('LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}

# Create logs directory if it doesn't exist
LOGS_DIR = BASE_DIR / 'logs'
LOGS_DIR.mkdir(exist_ok=True)
