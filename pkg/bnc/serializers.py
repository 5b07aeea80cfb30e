import math

from rest_framework import serializers

from verification.serializers import SolutionSerializer

from .branch_and_cut import STATUSES


class FiniteFloatField(serializers.FloatField):
    """Float that renders infinities and NaN as null"""

    def to_representation(self, value):
        if value is None:
            return None
        value = float(value)
        return value if math.isfinite(value) else None


class SolveReportSerializer(serializers.Serializer):
    """Serializer for branch-and-cut solve reports"""

    status = serializers.ChoiceField(choices=STATUSES)
    cost = FiniteFloatField(allow_null=True, help_text="Incumbent cost, null without incumbent")
    bound = FiniteFloatField(allow_null=True, help_text="Proven lower bound")
    gap = FiniteFloatField(allow_null=True, help_text="(cost - bound) / cost")
    nodes = serializers.IntegerField(min_value=0)
    cut_counts = serializers.DictField(child=serializers.IntegerField(min_value=0))
    rounding_successes = serializers.IntegerField(min_value=0)
    wall_time = serializers.FloatField(min_value=0.0)
    incumbent = SolutionSerializer(allow_null=True)
