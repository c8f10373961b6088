from django.apps import AppConfig


class ExperimentsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'clusterlink.experiments'
    verbose_name = 'Experiment Runner'
