"""Netlist and run spec documents.

A netlist is a tree of single-key mappings::

    schema_version: 1
    root:
      series:
        - diode: {}
        - parallel:
            - resistor: 1
            - capacitor: {capacitance: 1}

Composite nodes take a list of children, or a mapping with ``children`` and an optional ``name``.
Element nodes take a mapping of parameters, or a bare number for their main parameter.
"""
from __future__ import annotations

from functools import partial
from typing import cast

from attr import Factory, attrib, attrs
from marshmallow import Schema, ValidationError, fields, post_load, pre_load, validate
from marshmallow_polyfield import PolyField

from monotone_pss import const
from monotone_pss.elements import Capacitor, Inductor, LinearResistor, PiecewiseLinearResistor, ShockleyDiode
from monotone_pss.exceptions import ArgumentError
from monotone_pss.network.model import Element, OnePort, Parallel, Series
from monotone_pss.signal import DriveSpec, Sinusoid
from monotone_pss.utils import ModelSchemaPostLoadable

Positive = partial(validate.Range, min=0, min_inclusive=False)


def _single_key(obj) -> str:
    if not isinstance(obj, dict):
        raise ValidationError(f"A node must be a mapping with a single kind key, got {type(obj).__name__}")
    try:
        (key,) = obj.keys()
    except ValueError as e:
        raise ValidationError(f"A node must have exactly one kind key, got {sorted(map(str, obj))}") from e
    return str(key).strip().lower()


def node_deserialization_schema_selector(obj, parent_obj):
    key = _single_key(obj)
    try:
        return NODE_SCHEMAS[key]()
    except KeyError as e:
        raise ValidationError(
            f"Unknown node kind {key!r}; expected one of {sorted(NODE_SCHEMAS)}"
        ) from e


NodePolyfield = partial(PolyField, deserialization_schema_selector=node_deserialization_schema_selector)


class ElementSchema(Schema):
    """Unwraps ``{kind: parameters}`` and builds an Element around the device."""

    kind: str
    shorthand: str

    name = fields.Str(required=False)

    @pre_load
    def unwrap(self, data, many, **kwargs):
        parameters = next(iter(data.values()))
        if parameters is None:
            return {}
        if not isinstance(parameters, dict):
            return {self.shorthand: parameters}
        return parameters

    def device(self, **parameters):
        raise NotImplementedError  # pragma: no cover

    @post_load
    def build(self, data, many, **kwargs):
        name = data.pop("name", None)
        try:
            device = self.device(**data)
        except ArgumentError as e:
            raise ValidationError(str(e)) from e
        return Element(device, name=name)


class ResistorSchema(ElementSchema):
    kind = const.RESISTOR
    shorthand = "resistance"

    resistance = fields.Float(required=True, validate=Positive())

    def device(self, resistance):
        return LinearResistor(resistance)


class NegativeResistorSchema(ElementSchema):
    kind = const.NEGATIVE_RESISTOR
    shorthand = "resistance"

    resistance = fields.Float(required=True, validate=validate.Range(max=0, max_inclusive=False))

    def device(self, resistance):
        return LinearResistor(resistance)


class DiodeSchema(ElementSchema):
    kind = const.DIODE
    shorthand = "saturation_current"

    saturation_current = fields.Float(load_default=const.SATURATION_CURRENT, validate=Positive())
    ideality = fields.Float(load_default=const.IDEALITY_FACTOR, validate=validate.Range(min=1))
    thermal_voltage = fields.Float(load_default=const.THERMAL_VOLTAGE, validate=Positive())

    def device(self, **parameters):
        return ShockleyDiode(**parameters)


class PiecewiseLinearResistorSchema(ElementSchema):
    kind = const.PWL_RESISTOR
    shorthand = "breakpoints"

    breakpoints = fields.List(
        fields.Tuple((fields.Float(), fields.Float())),
        required=True,
        validate=validate.Length(min=2),
    )

    def device(self, breakpoints):
        return PiecewiseLinearResistor(breakpoints)


class CapacitorSchema(ElementSchema):
    kind = const.CAPACITOR
    shorthand = "capacitance"

    capacitance = fields.Float(required=True, validate=Positive())

    def device(self, capacitance):
        return Capacitor(capacitance)


class InductorSchema(ElementSchema):
    kind = const.INDUCTOR
    shorthand = "inductance"

    inductance = fields.Float(required=True, validate=Positive())

    def device(self, inductance):
        return Inductor(inductance)


class CompositeSchema(Schema):
    kind: str
    model: type

    name = fields.Str(required=False)
    children = NodePolyfield(many=True, required=True, validate=validate.Length(min=2))

    @pre_load
    def unwrap(self, data, many, **kwargs):
        body = next(iter(data.values()))
        return {"children": body} if isinstance(body, list) else body

    @post_load
    def build(self, data, many, **kwargs):
        return self.model(data["children"], name=data.get("name"))


class SeriesSchema(CompositeSchema):
    kind = const.SERIES
    model = Series


class ParallelSchema(CompositeSchema):
    kind = const.PARALLEL
    model = Parallel


NODE_SCHEMAS = {
    schema.kind: schema
    for schema in (
        SeriesSchema,
        ParallelSchema,
        ResistorSchema,
        NegativeResistorSchema,
        DiodeSchema,
        PiecewiseLinearResistorSchema,
        CapacitorSchema,
        InductorSchema,
    )
}


@attrs
class Netlist(ModelSchemaPostLoadable):
    root: OnePort = attrib()
    schema_version: int = attrib(default=const.SCHEMA_VERSION)

    @staticmethod
    def from_dict(_dict) -> Netlist:
        return cast(Netlist, NetlistSchema().load(_dict))


class NetlistSchema(Schema):
    schema_version = fields.Int(required=True, validate=validate.Equal(const.SCHEMA_VERSION))
    root = NodePolyfield(required=True)

    schema_post_loader = Netlist.schema_post_loader()


@attrs
class Drive(ModelSchemaPostLoadable):
    kind: str = attrib()
    bias: float = attrib(default=0.0)
    sinusoids: list = attrib(default=Factory(list))

    @property
    def spec(self) -> DriveSpec:
        return DriveSpec(self.bias, tuple(self.sinusoids))


class SinusoidSchema(Schema):
    amplitude = fields.Float(required=True)
    frequency = fields.Float(required=True, validate=Positive())
    phase = fields.Float(load_default=0.0)

    @post_load
    def build(self, data, many, **kwargs):
        return Sinusoid(**data)


class DriveSchema(Schema):
    kind = fields.Str(required=True, validate=validate.OneOf([const.CURRENT, const.VOLTAGE]))
    bias = fields.Float(load_default=0.0)
    sinusoids = fields.List(fields.Nested(SinusoidSchema), load_default=list)

    schema_post_loader = Drive.schema_post_loader()


@attrs
class Discretization(ModelSchemaPostLoadable):
    n_steps: int = attrib(default=500)
    period_seconds: float = attrib(default=1.0)
    derivative_scale: str = attrib(default="physical")


class DiscretizationSchema(Schema):
    n_steps = fields.Int(load_default=500, validate=validate.Range(min=2))
    period_seconds = fields.Float(load_default=1.0, validate=Positive())
    derivative_scale = fields.Str(load_default="physical", validate=validate.OneOf(["physical", "sample"]))

    schema_post_loader = Discretization.schema_post_loader()


class SolverSectionSchema(Schema):
    algorithm = fields.Str(validate=validate.OneOf(["forward", "forward-step", "dr", "douglas-rachford", "auto"]))
    alpha = fields.Float(allow_none=True, validate=Positive())
    lam = fields.Float(data_key="lambda", validate=Positive())
    tol = fields.Float(validate=Positive())
    max_iter = fields.Int(validate=validate.Range(min=1))
    form = fields.Str(validate=validate.OneOf(["auto", const.IMPEDANCE, const.ADMITTANCE]))


class OutputSectionSchema(Schema):
    csv_path = fields.Str(allow_none=True)
    log_path = fields.Str(allow_none=True)
    verbosity = fields.Str(load_default="info", validate=validate.OneOf(["quiet", "info", "debug"]))
    dump_branches = fields.Bool(load_default=False)


@attrs
class RunSpec(ModelSchemaPostLoadable):
    netlist: Netlist | str = attrib()
    drive: Drive = attrib()
    discretization: Discretization = attrib(default=Factory(Discretization))
    solver: dict = attrib(default=Factory(dict))
    output: dict = attrib(default=Factory(dict))

    @staticmethod
    def from_dict(_dict) -> RunSpec:
        return cast(RunSpec, RunSpecSchema().load(_dict))


class NetlistReferenceField(fields.Field):
    """Inline netlist document or a path to one, resolved by the loader."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            return value
        if isinstance(value, dict):
            return NetlistSchema().load(value)
        raise ValidationError("Netlist must be an inline document or a path")


class RunSpecSchema(Schema):
    netlist = NetlistReferenceField(required=True)
    drive = fields.Nested(DriveSchema, required=True)
    discretization = fields.Nested(DiscretizationSchema, load_default=lambda: Discretization())
    solver = fields.Nested(SolverSectionSchema, load_default=dict)
    output = fields.Nested(OutputSectionSchema, load_default=lambda: OutputSectionSchema().load({}))

    schema_post_loader = RunSpec.schema_post_loader()
