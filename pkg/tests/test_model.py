import pytest

from width_templater import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    GlobalPoolUnit,
    PoolUnit,
    SchemaError,
    ValidationError,
    extract_widths,
    final_feature_width,
    preset,
    validate,
)
from width_templater.model import dumps, from_json_dict, loads, to_json_dict
from width_templater.presets import VGG19_CIFAR_WIDTHS


def spec_of(units, input=(8, 8, 3), num_classes=10, name="t"):
    return ArchitectureSpec(name=name, input=input, units=tuple(units), num_classes=num_classes)


class TestPresets:
    def test_vgg19_is_valid_with_16_width_bearing_units(self):
        spec = validate(preset("vgg19-cifar", 10))
        widths = extract_widths(spec)
        assert len(widths) == 16  # 2+2+4+4+4 convs
        assert widths == VGG19_CIFAR_WIDTHS
        assert widths[0] == 64 and widths[-1] == 512
        assert final_feature_width(spec) == 512

    def test_vgg19_pool_layout(self):
        spec = preset("vgg19-cifar", 10)
        conv_seen = 0
        pools_after = []
        for unit in spec.units:
            if isinstance(unit, ConvUnit):
                conv_seen += 1
            else:
                pools_after.append(conv_seen)
        assert pools_after == [2, 4, 8, 12, 16]

    def test_vgg19_widths_follow_pyramidal_rule(self):
        # Each width equals or doubles its predecessor, and every doubling
        # sits right after a pooling unit.
        spec = preset("vgg19-cifar", 10)
        prev_width = None
        pool_since_prev = False
        for unit in spec.units:
            if isinstance(unit, PoolUnit):
                pool_since_prev = True
            elif isinstance(unit, ConvUnit):
                if prev_width is not None:
                    assert unit.width in (prev_width, 2 * prev_width)
                    if unit.width == 2 * prev_width:
                        assert pool_since_prev
                prev_width = unit.width
                pool_since_prev = False

    def test_resnet50_unit_layout(self):
        spec = validate(preset("resnet50-cifar", 10))
        widths = extract_widths(spec)
        assert widths == (64,) + (64,) * 3 + (128,) * 4 + (256,) * 6 + (512,) * 3
        assert final_feature_width(spec) == 2048
        assert isinstance(spec.units[0], ConvUnit) and spec.units[0].stride == 1
        assert isinstance(spec.units[-1], GlobalPoolUnit)
        strides = [u.stride for u in spec.units if isinstance(u, BottleneckUnit)]
        assert strides.count(2) == 3  # stage entries of stages 2-4 only
        projections = [u.has_projection for u in spec.units if isinstance(u, BottleneckUnit)]
        assert projections == [i in (0, 3, 7, 13) for i in range(16)]

    def test_num_classes_only_changes_classifier(self):
        a = preset("vgg19-cifar", 10)
        b = preset("vgg19-cifar", 100)
        assert a.units == b.units and a.input == b.input
        assert b.num_classes == 100

    def test_unknown_preset(self):
        with pytest.raises(KeyError):
            preset("alexnet", 10)


class TestValidate:
    def test_zero_width_reports_index(self):
        spec = spec_of([ConvUnit(width=8), ConvUnit(width=0)])
        with pytest.raises(ValidationError) as exc:
            validate(spec)
        assert any("unit 1: width must be >= 1" in e for e in exc.value.errors)

    def test_spatial_collapse(self):
        units = [ConvUnit(width=4)] + [PoolUnit(factor=2)] * 6
        spec = spec_of(units, input=(32, 32, 3))
        with pytest.raises(ValidationError) as exc:
            validate(spec)
        assert any("collapses below 1x1" in e for e in exc.value.errors)

    def test_empty_units(self):
        with pytest.raises(ValidationError) as exc:
            validate(spec_of([]))
        assert "units list is empty" in exc.value.errors

    def test_all_violations_reported_at_once(self):
        spec = spec_of([ConvUnit(width=0, kernel=4), ConvUnit(width=2, stride=0)], num_classes=1)
        with pytest.raises(ValidationError) as exc:
            validate(spec)
        messages = "\n".join(exc.value.errors)
        assert "width must be >= 1" in messages
        assert "kernel must be odd" in messages
        assert "stride must be >= 1" in messages
        assert "num_classes must be >= 2" in messages

    def test_bottleneck_expansion_pinned(self):
        unit = BottleneckUnit(base_width=4, expansion=2, has_projection=True)
        with pytest.raises(ValidationError) as exc:
            validate(spec_of([unit]))
        assert any("expansion must be 4" in e for e in exc.value.errors)

    def test_missing_required_projection(self):
        # input has 3 channels, block outputs 16: identity cannot carry it
        spec = spec_of([BottleneckUnit(base_width=4, has_projection=False)])
        with pytest.raises(ValidationError) as exc:
            validate(spec)
        assert any("projection required" in e for e in exc.value.errors)

    def test_gratuitous_projection(self):
        units = [
            ConvUnit(width=16),
            BottleneckUnit(base_width=4, has_projection=True),  # 16 == 4*4 fits
        ]
        with pytest.raises(ValidationError) as exc:
            validate(spec_of(units))
        assert any("identity shortcut already fits" in e for e in exc.value.errors)

    def test_width_bearing_required(self):
        with pytest.raises(ValidationError) as exc:
            validate(spec_of([GlobalPoolUnit()]))
        assert "spec has no width-bearing units" in exc.value.errors

    def test_extract_widths_single_conv(self):
        spec = validate(spec_of([ConvUnit(width=8)]))
        assert extract_widths(spec) == (8,)


class TestJson:
    @pytest.mark.parametrize("name", ["vgg19-cifar", "resnet50-cifar"])
    def test_round_trip_presets(self, name):
        spec = preset(name, 10)
        assert from_json_dict(to_json_dict(spec)) == spec
        assert loads(dumps(spec)) == spec

    def test_unknown_top_level_field(self):
        doc = to_json_dict(preset("vgg19-cifar", 10))
        doc["extra"] = 1
        with pytest.raises(SchemaError, match="extra"):
            from_json_dict(doc)

    def test_unknown_unit_field(self):
        doc = to_json_dict(preset("vgg19-cifar", 10))
        doc["units"][0]["bogus"] = 1
        with pytest.raises(SchemaError, match="bogus"):
            from_json_dict(doc)

    def test_missing_required_unit_field(self):
        doc = to_json_dict(preset("vgg19-cifar", 10))
        del doc["units"][0]["width"]
        with pytest.raises(SchemaError, match="width"):
            from_json_dict(doc)

    def test_field_types_enforced(self):
        doc = to_json_dict(preset("vgg19-cifar", 10))
        doc["units"][0]["width"] = True
        with pytest.raises(SchemaError, match="width"):
            from_json_dict(doc)
        doc["units"][0]["width"] = 64
        doc["units"][0]["has_bn"] = 1
        with pytest.raises(SchemaError, match="has_bn"):
            from_json_dict(doc)

    def test_bad_input_object(self):
        doc = to_json_dict(preset("vgg19-cifar", 10))
        doc["input"] = {"h": 32, "w": 32}
        with pytest.raises(SchemaError, match="input"):
            from_json_dict(doc)

    def test_unit_defaults_applied(self):
        doc = {
            "name": "mini",
            "input": {"h": 8, "w": 8, "c": 3},
            "num_classes": 2,
            "units": [{"kind": "conv", "width": 4}, {"kind": "pool"}],
        }
        spec = from_json_dict(doc)
        conv = spec.units[0]
        assert (conv.kernel, conv.stride, conv.has_bn) == (3, 1, True)
        assert spec.units[1].factor == 2

    def test_omitted_projection_derived_from_wiring(self):
        base = preset("resnet50-cifar", 10)
        doc = to_json_dict(base)
        for unit in doc["units"]:
            unit.pop("has_projection", None)
        assert from_json_dict(doc) == base

    def test_invalid_json_text(self):
        with pytest.raises(SchemaError, match="invalid JSON"):
            loads("{nope")
