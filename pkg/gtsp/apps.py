from django.apps import AppConfig


class GtspConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gtsp'
    verbose_name = 'GTSP Solvers'
