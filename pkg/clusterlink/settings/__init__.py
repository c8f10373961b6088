"""
ClusterLink Settings Package
"""

# Import celery app when Django starts
from clusterlink.celery import app as celery_app

__all__ = ('celery_app',)
