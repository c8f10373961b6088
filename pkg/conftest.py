"""Configure Django settings before pytest collects the test modules."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'clusterlink.settings.base')
django.setup()
