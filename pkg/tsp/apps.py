from django.apps import AppConfig


class TspConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tsp'
    verbose_name = 'Tour Subroutines'
