"""
Celery Configuration for ClusterLink

Long figure reproductions (10^7-sample DOR runs, device-count searches) can be
queued to a worker instead of blocking a shell.

For more information on Celery configuration, see:
https://docs.celeryq.dev/en/stable/django/first-steps-with-django.html
"""

import os
from celery import Celery

# Set the default Django settings module
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'clusterlink.settings.base')

app = Celery('clusterlink')

# Load config from Django settings
app.config_from_object('django.conf:settings', namespace='CELERY')

# Auto-discover tasks in all installed apps
app.autodiscover_tasks()
