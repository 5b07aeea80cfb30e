from rest_framework import serializers

from verification.serializers import SolutionSerializer


class ConfigurationField(serializers.Field):
    """Configuration rendered as its C(g,a) label"""

    def to_representation(self, value):
        return str(value)


class HeuristicReportSerializer(serializers.Serializer):
    """Serializer for transformation + LNS pipeline reports"""

    cost = serializers.FloatField(min_value=0.0)
    tour = serializers.ListField(child=ConfigurationField(), help_text="Configuration tour from C(0,0)")
    vertices = serializers.IntegerField(min_value=1, help_text="Vertices of the transformed graph")
    edges = serializers.IntegerField(min_value=0)
    iterations = serializers.IntegerField(min_value=0)
    improvements = serializers.IntegerField(min_value=0)
    wall_time = serializers.FloatField(min_value=0.0)
    solution = SolutionSerializer()


class GtspResultSerializer(serializers.Serializer):
    """Tour found on a GTSP graph read from file"""

    cost = serializers.FloatField(min_value=0.0)
    tour = serializers.ListField(child=ConfigurationField())
    iterations = serializers.IntegerField(min_value=0)
    improvements = serializers.IntegerField(min_value=0)
    wall_time = serializers.FloatField(min_value=0.0)
