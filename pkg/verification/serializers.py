from rest_framework import serializers


class SolutionSerializer(serializers.Serializer):
    """Machine-readable view of a Solution"""

    gv_ring = serializers.ListField(child=serializers.IntegerField(min_value=0))
    subtours = serializers.DictField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0)),
        help_text="stop -> UAV-visited targets in flight order"
    )
    assignment = serializers.DictField(child=serializers.IntegerField(min_value=0))


class FeasibilityReportSerializer(serializers.Serializer):
    """Serializer for check_feasibility output"""

    ok = serializers.BooleanField()
    violations = serializers.ListField(child=serializers.CharField())
    cost = serializers.FloatField(required=False, allow_null=True)
    recorded_cost = serializers.FloatField(required=False, allow_null=True)
