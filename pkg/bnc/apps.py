from django.apps import AppConfig


class BncConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'bnc'
    verbose_name = 'Branch-and-Cut'
