"""
Instances App Configuration
Problem data model, generators and instance files
"""

from django.apps import AppConfig


class InstancesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'instances'
    verbose_name = 'CAGVRP Instances'
