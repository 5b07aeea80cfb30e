from rest_framework import serializers

from instances.domain import CLASS_TAGS

from .runners import METHOD_BNC, METHODS, STATUS_FAILED

BENCH_COLUMNS = ('instance', 'method', 'cost', 'bound', 'gap%', 'nodes', 'cuts', 'seconds',
                 'class', 'n', 'alpha', 'status')


class BenchRowSerializer(serializers.Serializer):
    """
    One bench report line

    Validated before the CSV is written so the column schema stays stable.
    """

    instance = serializers.CharField(help_text="Instance file stem")
    method = serializers.ChoiceField(choices=METHODS)
    cost = serializers.FloatField(allow_null=True, min_value=0.0)
    bound = serializers.FloatField(allow_null=True)
    gap_pct = serializers.FloatField(allow_null=True, min_value=0.0,
                                     help_text="Relative gap to the best proven optimum, in percent")
    nodes = serializers.IntegerField(min_value=0)
    cuts = serializers.IntegerField(min_value=0)
    seconds = serializers.FloatField(min_value=0.0)
    class_tag = serializers.ChoiceField(choices=CLASS_TAGS)
    n = serializers.IntegerField(min_value=1)
    alpha = serializers.FloatField(min_value=0.0)
    status = serializers.CharField(max_length=20)

    def validate(self, data):
        if data['status'] != STATUS_FAILED and data['cost'] is None and data['method'] != METHOD_BNC:
            raise serializers.ValidationError("a successful heuristic or oracle run must carry a cost")
        return data
