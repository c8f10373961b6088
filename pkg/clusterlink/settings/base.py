"""
ClusterLink - Base Django Settings

Shared configuration for all environments. Simulation knobs can be overridden
through CLUSTERLINK_* environment variables or a .env file at the project root.

NOTE: No database is required. The experiment runner only uses Django for
      settings, logging, management commands, forms and templates.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Optional .env for local overrides (never required)
load_dotenv(BASE_DIR / '.env')


def env_int(name: str, default: int) -> int:
    """Read an integer setting from the environment."""
    value = os.environ.get(name, '').strip()
    return int(value) if value else default


def env_bool(name: str, default: bool) -> bool:
    """Read a boolean setting from the environment."""
    value = os.environ.get(name, '').strip().lower()
    if not value:
        return default
    return value in ('1', 'true', 'yes', 'on')


# DEBUG is overridden to False in production.py
DEBUG = env_bool('CLUSTERLINK_DEBUG', True)

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'clusterlink-local-only')

ALLOWED_HOSTS = ['localhost', '127.0.0.1', '[::1]']

# Application definition
INSTALLED_APPS = [
    # ClusterLink apps
    'clusterlink.experiments',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {},
    },
]

# No models; an in-memory database keeps the test runner happy
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# =============================================================================
# Simulation settings
# =============================================================================
# Sample counts: outage figures need the body of the CDF, DOR figures need
# >= 10^3 expected tail hits at the 10^-4 level.
CLUSTERLINK_OUTAGE_SAMPLES = env_int('CLUSTERLINK_OUTAGE_SAMPLES', 10**6)
CLUSTERLINK_DOR_SAMPLES = env_int('CLUSTERLINK_DOR_SAMPLES', 10**7)
CLUSTERLINK_SEED = env_int('CLUSTERLINK_SEED', 2024)

# Each block owns one Philox substream per device
CLUSTERLINK_BLOCK_SIZE = env_int('CLUSTERLINK_BLOCK_SIZE', 65536)
CLUSTERLINK_MAX_WORKERS = env_int('CLUSTERLINK_MAX_WORKERS', os.cpu_count() or 1)

# Above this many samples the empirical CDF switches to histogram storage
CLUSTERLINK_MAX_SORTED_SAMPLES = env_int('CLUSTERLINK_MAX_SORTED_SAMPLES', 10**8)
CLUSTERLINK_HISTOGRAM_BINS = env_int('CLUSTERLINK_HISTOGRAM_BINS', 10**5)

# Largest cluster the device-count search will try
CLUSTERLINK_DEVICE_CAP = env_int('CLUSTERLINK_DEVICE_CAP', 4096)

# DOR thresholds 2^x - 1 with x above this are reported as certain outage
CLUSTERLINK_DOR_SATURATION_EXPONENT = env_int('CLUSTERLINK_DOR_SATURATION_EXPONENT', 64)

CLUSTERLINK_CACHE_DIR = Path(os.environ.get('CLUSTERLINK_CACHE_DIR', BASE_DIR / 'cache'))
CLUSTERLINK_OUTPUT_DIR = Path(os.environ.get('CLUSTERLINK_OUTPUT_DIR', BASE_DIR / 'output'))

# Celery Configuration
CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'redis://localhost:6379/1')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = 6 * 60 * 60  # 6 hours, full fig6 searches are slow
CELERY_TASK_ALWAYS_EAGER = env_bool('CELERY_TASK_ALWAYS_EAGER', False)

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': BASE_DIR / 'logs' / 'clusterlink.log',
            'maxBytes': 10 * 1024 * 1024,  # 10 MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.getenv('DJANGO_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'clusterlink': {
            'handlers': ['console', 'file'],
            'level': os.getenv('CLUSTERLINK_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'celery': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Create logs directory for development
if DEBUG:
    os.makedirs(BASE_DIR / 'logs', exist_ok=True)
