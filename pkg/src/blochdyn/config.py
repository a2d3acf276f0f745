"""Run configuration: JSON schema validation and object construction.

A configuration file is a single JSON document validated against the schema
shipped as config_schema.json, then lowered onto the model types. Complex
numbers are [re, im] pairs, matrices row-major nested arrays, and all level
and control indices 0-based.
"""

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .errors import ConfigError
from .model import ControlField, ControlSystem, DissipationSpec, dipole_coupling
from .states import CoherenceVector, check_density, from_coherence_vector, from_pure

DEFAULT_OUTPUTS = ("bloch", "purity")


def _schema():
    text = resources.files("blochdyn").joinpath("config_schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration lowered onto model objects."""

    system: ControlSystem
    dissipation: DissipationSpec
    field: ControlField
    rho0: np.ndarray
    duration: float
    sample_dt: object
    outputs: tuple
    sweep_control: object
    sweep_amplitudes: object
    raw: dict

    def equivalent(self, other):
        """Field-by-field equality, arrays compared exactly."""
        same = (
            np.array_equal(self.system.h0, other.system.h0)
            and len(self.system.controls) == len(other.system.controls)
            and all(
                np.array_equal(a, b)
                for a, b in zip(self.system.controls, other.system.controls)
            )
            and self.system.hbar == other.system.hbar
            and np.array_equal(self.dissipation.dephasing, other.dissipation.dephasing)
            and np.array_equal(self.dissipation.relaxation, other.dissipation.relaxation)
            and self.field.kind == other.field.kind
            and len(self.field.segments) == len(other.field.segments)
            and all(
                da == db and np.array_equal(va, vb)
                for (da, va), (db, vb) in zip(self.field.segments, other.field.segments)
            )
            and np.array_equal(self.rho0, other.rho0)
            and self.duration == other.duration
            and self.sample_dt == other.sample_dt
            and self.outputs == other.outputs
            and self.sweep_control == other.sweep_control
        )
        if not same:
            return False
        if self.sweep_amplitudes is None or other.sweep_amplitudes is None:
            return self.sweep_amplitudes is None and other.sweep_amplitudes is None
        return np.array_equal(self.sweep_amplitudes, other.sweep_amplitudes)


def _complex(pair):
    return complex(pair[0], pair[1])


def _complex_matrix(rows):
    return np.array([[_complex(x) for x in row] for row in rows], dtype=complex)


def load_config(path):
    """Parse, schema-validate and lower a configuration file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read config: %s" % exc) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "config is not valid JSON (line %d, column %d): %s"
            % (exc.lineno, exc.colno, exc.msg)
        ) from exc
    return parse_config(doc)


def parse_config(doc):
    """Lower an already-decoded configuration document."""
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(top level)"
        raise ConfigError("config field %s: %s" % (where, exc.message)) from exc

    sysdoc = doc["system"]
    levels = sysdoc["levels"]
    energies = sysdoc["energies"]
    if len(energies) != levels:
        raise ConfigError(
            "system.energies has %d entries for %d levels" % (len(energies), levels)
        )
    controls = []
    for i, dip in enumerate(sysdoc.get("dipoles", [])):
        j, k = dip["levels"]
        try:
            controls.append(
                dipole_coupling(levels, j, k, dip["moment"], dip.get("axis", "x"))
            )
        except ValueError as exc:
            raise ConfigError("system.dipoles[%d]: %s" % (i, exc)) from exc
    try:
        system = ControlSystem(
            h0=np.diag(np.asarray(energies, dtype=float)).astype(complex),
            controls=tuple(controls),
            hbar=float(sysdoc.get("hbar", 1.0)),
        )
    except ValueError as exc:
        raise ConfigError("system: %s" % exc) from exc

    dis = doc["dissipation"]
    try:
        spec = DissipationSpec(
            dephasing=np.asarray(dis["dephasing"], dtype=float),
            relaxation=np.asarray(dis["relaxation"], dtype=float),
        )
    except ValueError as exc:
        raise ConfigError("dissipation: %s" % exc) from exc
    if spec.dim != levels:
        raise ConfigError(
            "dissipation matrices are %dx%d but the system has %d levels"
            % (spec.dim, spec.dim, levels)
        )

    flddoc = doc["field"]
    try:
        field = ControlField(
            segments=tuple((s["duration"], s["values"]) for s in flddoc["segments"]),
            kind=flddoc.get("kind", "piecewise"),
        )
    except ValueError as exc:
        raise ConfigError("field: %s" % exc) from exc
    if field.n_controls != system.n_controls:
        raise ConfigError(
            "field segments carry %d amplitudes but the system has %d controls"
            % (field.n_controls, system.n_controls)
        )

    rho0 = _initial_state(doc["initial"], levels)

    rundoc = doc.get("run", {})
    duration = rundoc.get("duration", field.total_duration)
    if duration > field.total_duration * (1 + 1e-12) + 1e-15:
        raise ConfigError(
            "run.duration %g exceeds the field program length %g"
            % (duration, field.total_duration)
        )
    sample_dt = rundoc.get("sample_dt")
    outputs = tuple(rundoc.get("outputs", DEFAULT_OUTPUTS))

    sweepdoc = doc.get("sweep")
    sweep_control = None
    sweep_amplitudes = None
    if sweepdoc is not None:
        sweep_control = sweepdoc["control"]
        if sweep_control >= system.n_controls:
            raise ConfigError(
                "sweep.control %d out of range for %d controls"
                % (sweep_control, system.n_controls)
            )
        sweep_amplitudes = np.asarray(sweepdoc["amplitudes"], dtype=float)

    return RunConfig(
        system=system,
        dissipation=spec,
        field=field,
        rho0=rho0,
        duration=float(duration),
        sample_dt=sample_dt,
        outputs=outputs,
        sweep_control=sweep_control,
        sweep_amplitudes=sweep_amplitudes,
        raw=doc,
    )


def _initial_state(doc, levels):
    # validity failures here are physics errors, not parse errors, and pass
    # through as UnphysicalStateError
    if "pure" in doc:
        amps = [_complex(p) for p in doc["pure"]]
        if len(amps) != levels:
            raise ConfigError(
                "initial.pure has %d amplitudes for %d levels" % (len(amps), levels)
            )
        try:
            return from_pure(amps)
        except ValueError as exc:
            raise ConfigError("initial.pure: %s" % exc) from exc
    if "density" in doc:
        rho = _complex_matrix(doc["density"])
        if rho.shape != (levels, levels):
            raise ConfigError(
                "initial.density must be %dx%d, got %dx%d"
                % (levels, levels, rho.shape[0], rho.shape[1])
            )
        check_density(rho)
        return rho
    cdoc = doc["coherence"]
    bloch = np.asarray(cdoc["bloch"], dtype=float)
    if bloch.size != levels * levels - 1:
        raise ConfigError(
            "initial.coherence.bloch needs %d components for %d levels"
            % (levels * levels - 1, levels)
        )
    v = CoherenceVector(bloch=bloch, trace_part=float(cdoc.get("trace_part", 1.0)))
    return from_coherence_vector(v)


def template_names():
    """Names of the configuration templates shipped with the package."""
    tdir = resources.files("blochdyn").joinpath("templates")
    names = [p.name[: -len(".json")] for p in tdir.iterdir() if p.name.endswith(".json")]
    return sorted(names)


def template_text(name):
    """Raw text of a shipped template."""
    if name not in template_names():
        raise ConfigError(
            "unknown template %r (available: %s)" % (name, ", ".join(template_names()))
        )
    return (
        resources.files("blochdyn")
        .joinpath("templates")
        .joinpath(name + ".json")
        .read_text()
    )


def load_template(name):
    """Parse a shipped template into a RunConfig."""
    return parse_config(json.loads(template_text(name)))
