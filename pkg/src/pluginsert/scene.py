"""Scene specifications: paired plug/socket geometry plus sampling settings.

Scenes are stored as YAML (see README for the schema) and a small built-in
catalog covers the benchmark geometries: small plugs at 0.5-0.6 mm tolerance
and ~50 mm plugs in Easy (2 mm), Medium (1 mm) and Hard (0.1 mm) tiers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .geometry import (
    InvalidArgument,
    PlugModel,
    Pose,
    SocketModel,
    penetration_depth,
    rpy_matrix,
)


@dataclass(frozen=True, eq=False)
class SceneSpec:
    name: str
    plug: PlugModel
    socket: SocketModel
    retract_height: float = 10.0
    surface_samples: int = 1000
    sample_seed: int = 0

    def __post_init__(self):
        if self.plug.primitive != self.socket.primitive:
            raise InvalidArgument("plug and cavity primitives must match")
        gaps = [c - p for c, p in zip(self.socket.cavity_dims, self.plug.dims)]
        tol = min(gaps)
        if tol <= 0:
            raise InvalidArgument("cavity must be larger than the plug")
        if abs(tol - self.socket.tolerance) > 1e-9:
            raise InvalidArgument(
                f"declared tolerance {self.socket.tolerance} mm does not match geometry ({tol} mm)"
            )
        if self.retract_height <= 0 or self.surface_samples < 4:
            raise InvalidArgument("invalid retract height or sampling resolution")
        # A fully inserted plug must be collision-free.
        pen = penetration_depth(
            self.plug, self.socket.goal_pose(), self.socket, self.surface_samples, self.sample_seed
        )
        if pen > 1e-9:
            raise InvalidArgument(f"goal pose penetrates socket material by {pen:.3g} mm")

    @property
    def tolerance(self) -> float:
        return self.socket.tolerance

    def goal_pose(self) -> Pose:
        return self.socket.goal_pose()

    def retract_pose(self) -> Pose:
        return self.socket.retract_pose(self.retract_height)


def scene_to_dict(scene: SceneSpec) -> dict:
    base = scene.socket.base_pose
    return {
        "name": scene.name,
        "primitive": scene.plug.primitive,
        "plug": {"dims": list(scene.plug.dims), "height": scene.plug.height},
        "socket": {
            "cavity_dims": list(scene.socket.cavity_dims),
            "cavity_depth": scene.socket.cavity_depth,
            "block": list(scene.socket.block),
            "tolerance": scene.socket.tolerance,
            "base_translation": [float(v) for v in base.translation],
            "base_rotation": [float(v) for v in base.rotation.reshape(9)],
        },
        "retract_height": scene.retract_height,
        "surface_samples": scene.surface_samples,
        "sample_seed": scene.sample_seed,
    }


def scene_from_dict(data: dict) -> SceneSpec:
    try:
        prim = data["primitive"]
        plug = PlugModel(prim, tuple(data["plug"]["dims"]), float(data["plug"]["height"]))
        sock = data["socket"]
        base_t = np.asarray(sock.get("base_translation", [0.0, 0.0, 0.0]), dtype=np.float64)
        base_r = np.asarray(
            sock.get("base_rotation", np.eye(3).reshape(9).tolist()), dtype=np.float64
        ).reshape(3, 3)
        socket = SocketModel(
            primitive=prim,
            cavity_dims=tuple(sock["cavity_dims"]),
            cavity_depth=float(sock["cavity_depth"]),
            block=tuple(sock["block"]),
            base_pose=Pose(base_t, base_r),
            tolerance=float(sock["tolerance"]),
        )
        return SceneSpec(
            name=str(data["name"]),
            plug=plug,
            socket=socket,
            retract_height=float(data.get("retract_height", 10.0)),
            surface_samples=int(data.get("surface_samples", 1000)),
            sample_seed=int(data.get("sample_seed", 0)),
        )
    except KeyError as exc:
        raise InvalidArgument(f"scene definition missing field {exc}") from exc


def save_scene(scene: SceneSpec, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(scene_to_dict(scene), fh, sort_keys=False)


def load_scene(path) -> SceneSpec:
    with open(path) as fh:
        return scene_from_dict(yaml.safe_load(fh))


def _make_scene(name, prim, plug_dims, cavity_dims, height, depth,
                block, tolerance) -> SceneSpec:
    plug = PlugModel(prim, plug_dims, height)
    socket = SocketModel(
        primitive=prim,
        cavity_dims=cavity_dims,
        cavity_depth=depth,
        block=block,
        base_pose=Pose.identity(),
        tolerance=tolerance,
    )
    return SceneSpec(name=name, plug=plug, socket=socket)


def catalog() -> dict:
    """Built-in scenes keyed by name."""
    scenes = [
        # small plugs, tight tolerance
        _make_scene("round_8", "cylinder", (8.0,), (8.5,), 25.0, 12.0, (40.0, 40.0, 25.0), 0.5),
        _make_scene("round_12", "cylinder", (12.0,), (12.5,), 30.0, 15.0, (45.0, 45.0, 28.0), 0.5),
        _make_scene("round_16", "cylinder", (16.0,), (16.6,), 30.0, 15.0, (50.0, 50.0, 28.0), 0.6),
        _make_scene("rect_12", "box", (12.0, 12.0), (12.5, 12.5), 30.0, 15.0, (45.0, 45.0, 28.0), 0.5),
        _make_scene("rect_16", "box", (16.0, 16.0), (16.6, 16.6), 30.0, 15.0, (50.0, 50.0, 28.0), 0.6),
        # ~50 mm plugs across difficulty tiers
        _make_scene("cyl_easy", "cylinder", (50.0,), (52.0,), 50.0, 25.0, (90.0, 90.0, 40.0), 2.0),
        _make_scene("cyl_medium", "cylinder", (50.0,), (51.0,), 50.0, 25.0, (90.0, 90.0, 40.0), 1.0),
        _make_scene("cyl_hard", "cylinder", (50.0,), (50.1,), 50.0, 25.0, (90.0, 90.0, 40.0), 0.1),
        _make_scene("rect_easy", "box", (50.0, 50.0), (52.0, 52.0), 50.0, 25.0, (90.0, 90.0, 40.0), 2.0),
        _make_scene("rect_medium", "box", (50.0, 50.0), (51.0, 51.0), 50.0, 25.0, (90.0, 90.0, 40.0), 1.0),
        _make_scene("rect_hard", "box", (50.0, 50.0), (50.1, 50.1), 50.0, 25.0, (90.0, 90.0, 40.0), 0.1),
        _make_scene("tri_easy", "prism3", (50.0,), (52.0,), 50.0, 25.0, (90.0, 90.0, 40.0), 2.0),
        _make_scene("tri_medium", "prism3", (50.0,), (51.0,), 50.0, 25.0, (90.0, 90.0, 40.0), 1.0),
        _make_scene("tri_hard", "prism3", (50.0,), (50.1,), 50.0, 25.0, (90.0, 90.0, 40.0), 0.1),
    ]
    return {s.name: s for s in scenes}


def get_scene(name: str) -> SceneSpec:
    scenes = catalog()
    try:
        return scenes[name]
    except KeyError:
        raise InvalidArgument(f"unknown scene {name!r}; known: {sorted(scenes)}") from None
