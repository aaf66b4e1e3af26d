"""Dataset bundle IO.

A bundle is a directory with a JSON manifest plus raw little-endian
float32 tensors, one file per video:

    manifest.json
    poses/<id>.f32      L*J*2 floats, row-major (frame, joint, xy)
    conf/<id>.f32       L*J floats, optional; missing file means 1.0
    features/<id>.f32   d floats

Shapes are always declared in the manifest, never inferred from file
sizes; a size disagreement is an error.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    CorruptTensorError,
    IoFailureError,
    MissingFileError,
    ShapeMismatchError,
    UnknownLabelError,
)

MANIFEST_NAME = "manifest.json"
DEFAULT_JOINT_COUNT = 17


@dataclass(frozen=True)
class VideoEntry:
    """One video's manifest row."""

    id: str
    label: int
    frame_count: int
    pose_path: str
    feature_path: str


@dataclass
class DatasetManifest:
    videos: list[VideoEntry]
    class_names: list[str]
    feature_dim: int
    joint_count: int = DEFAULT_JOINT_COUNT
    splits: dict[str, list[str]] = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def validate(self) -> None:
        if self.feature_dim < 1:
            raise ShapeMismatchError("feature_dim must be >= 1")
        if self.joint_count < 1:
            raise ShapeMismatchError("joint_count must be >= 1")
        seen: set[str] = set()
        for v in self.videos:
            if v.id in seen:
                raise ShapeMismatchError(f"duplicate video id {v.id!r}")
            seen.add(v.id)
            if not (0 <= v.label < self.num_classes):
                raise UnknownLabelError(
                    f"video {v.id!r}: label {v.label} outside [0, {self.num_classes})"
                )
            if v.frame_count < 1:
                raise ShapeMismatchError(f"video {v.id!r}: frame_count must be >= 1")
        for split, ids in self.splits.items():
            unknown = set(ids) - seen
            if unknown:
                raise ShapeMismatchError(f"split {split!r} references unknown ids {sorted(unknown)}")

    def to_dict(self) -> dict:
        return {
            "videos": [
                {
                    "id": v.id,
                    "label": v.label,
                    "frame_count": v.frame_count,
                    "pose_path": v.pose_path,
                    "feature_path": v.feature_path,
                }
                for v in self.videos
            ],
            "class_names": list(self.class_names),
            "feature_dim": self.feature_dim,
            "joint_count": self.joint_count,
            "splits": {k: list(ids) for k, ids in self.splits.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetManifest":
        try:
            videos = [
                VideoEntry(
                    id=str(v["id"]),
                    label=int(v["label"]),
                    frame_count=int(v["frame_count"]),
                    pose_path=str(v["pose_path"]),
                    feature_path=str(v["feature_path"]),
                )
                for v in data["videos"]
            ]
            manifest = cls(
                videos=videos,
                class_names=[str(c) for c in data["class_names"]],
                feature_dim=int(data["feature_dim"]),
                joint_count=int(data.get("joint_count", DEFAULT_JOINT_COUNT)),
                splits={k: [str(i) for i in ids] for k, ids in data.get("splits", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeMismatchError(f"malformed manifest: {exc}") from exc
        manifest.validate()
        return manifest


@dataclass
class PoseSequence:
    """Per-video keypoints (L, J, 2) with per-joint confidences (L, J)."""

    keypoints: np.ndarray
    confidence: np.ndarray

    def __post_init__(self) -> None:
        kp = np.asarray(self.keypoints, dtype=np.float32)
        if kp.ndim != 3 or kp.shape[2] != 2:
            raise ShapeMismatchError(f"keypoints must be (L, J, 2), got {kp.shape}")
        conf = np.asarray(self.confidence, dtype=np.float32)
        if conf.shape != kp.shape[:2]:
            raise ShapeMismatchError(
                f"confidence shape {conf.shape} does not match keypoints {kp.shape[:2]}"
            )
        if not np.all(np.isfinite(kp)):
            raise CorruptTensorError("keypoints contain NaN/Inf")
        if not np.all(np.isfinite(conf)) or conf.min(initial=1.0) < 0.0 or conf.max(initial=0.0) > 1.0:
            raise CorruptTensorError("confidence values must lie in [0, 1]")
        self.keypoints = kp
        self.confidence = conf

    @property
    def num_frames(self) -> int:
        return self.keypoints.shape[0]

    @property
    def num_joints(self) -> int:
        return self.keypoints.shape[1]


def write_f32(path: Path, arr: np.ndarray) -> None:
    """Write an array as raw little-endian float32, row-major."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.ascontiguousarray(arr, dtype="<f4").tofile(path)
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_f32(path: Path, shape: tuple[int, ...]) -> np.ndarray:
    """Read a raw float32 file with a declared shape; size must match exactly."""
    if not path.is_file():
        raise MissingFileError(f"missing tensor file {path}")
    expected = 4 * int(np.prod(shape, dtype=np.int64)) if shape else 4
    actual = path.stat().st_size
    if actual != expected:
        raise ShapeMismatchError(
            f"{path}: expected {expected} bytes for shape {shape}, found {actual}"
        )
    data = np.fromfile(path, dtype="<f4")
    return data.reshape(shape)


def _resolve_inside(root: Path, rel: str) -> Path:
    target = (root / rel).resolve()
    if not target.is_relative_to(root.resolve()):
        raise ShapeMismatchError(f"path {rel!r} escapes the bundle directory")
    return target


class Bundle:
    """A dataset manifest plus accessors for per-video tensors.

    Directory-backed bundles read tensors lazily and cache them;
    in-memory bundles (from the synthetic generator) hold them directly.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        root: Path | None = None,
        poses: Mapping[str, PoseSequence] | None = None,
        features: Mapping[str, np.ndarray] | None = None,
    ):
        manifest.validate()
        self.manifest = manifest
        self.root = Path(root) if root is not None else None
        self._poses: dict[str, PoseSequence] = dict(poses or {})
        self._features: dict[str, np.ndarray] = {}
        for vid, z in (features or {}).items():
            self._features[vid] = np.asarray(z, dtype=np.float32)
        self._entries = {v.id: v for v in manifest.videos}

    @property
    def video_ids(self) -> list[str]:
        return [v.id for v in self.manifest.videos]

    def entry(self, video_id: str) -> VideoEntry:
        try:
            return self._entries[video_id]
        except KeyError:
            raise MissingFileError(f"unknown video id {video_id!r}") from None

    def label(self, video_id: str) -> int:
        return self.entry(video_id).label

    def split_ids(self, split: str) -> list[str]:
        if split == "all":
            return self.video_ids
        return list(self.manifest.splits.get(split, []))

    def split_of(self, video_id: str) -> str:
        for split, ids in self.manifest.splits.items():
            if video_id in ids:
                return split
        return ""

    def pose(self, video_id: str) -> PoseSequence:
        entry = self.entry(video_id)
        if video_id not in self._poses:
            if self.root is None:
                raise MissingFileError(f"no pose data for {video_id!r}")
            L, J = entry.frame_count, self.manifest.joint_count
            kp = read_f32(_resolve_inside(self.root, entry.pose_path), (L, J, 2))
            conf_path = self.root / "conf" / f"{video_id}.f32"
            if conf_path.is_file():
                conf = read_f32(conf_path, (L, J))
            else:
                conf = np.ones((L, J), dtype=np.float32)
            self._poses[video_id] = PoseSequence(keypoints=kp, confidence=conf)
        return self._poses[video_id]

    def features(self, video_id: str) -> np.ndarray:
        entry = self.entry(video_id)
        if video_id not in self._features:
            if self.root is None:
                raise MissingFileError(f"no feature data for {video_id!r}")
            z = read_f32(_resolve_inside(self.root, entry.feature_path), (self.manifest.feature_dim,))
            if not np.all(np.isfinite(z)):
                raise CorruptTensorError(f"features for {video_id!r} contain NaN/Inf")
            self._features[video_id] = z
        return self._features[video_id]

    def feature_matrix(self, video_ids: list[str] | None = None) -> np.ndarray:
        ids = self.video_ids if video_ids is None else video_ids
        if not ids:
            return np.zeros((0, self.manifest.feature_dim), dtype=np.float32)
        return np.stack([self.features(v) for v in ids])

    def labels(self, video_ids: list[str] | None = None) -> np.ndarray:
        ids = self.video_ids if video_ids is None else video_ids
        return np.array([self.label(v) for v in ids], dtype=np.int64)

    def iter_poses(self) -> Iterator[tuple[str, PoseSequence]]:
        for vid in self.video_ids:
            yield vid, self.pose(vid)

    def check_all(self) -> None:
        """Eagerly load every tensor, surfacing any validation error."""
        for vid in self.video_ids:
            pose = self.pose(vid)
            if pose.num_frames != self.entry(vid).frame_count:
                raise ShapeMismatchError(f"{vid!r}: frame count mismatch")
            if pose.num_joints != self.manifest.joint_count:
                raise ShapeMismatchError(f"{vid!r}: joint count mismatch")
            self.features(vid)


def load_bundle(directory: str | os.PathLike) -> Bundle:
    """Open a bundle directory, validating the manifest and file sizes."""
    root = Path(directory)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingFileError(f"no {MANIFEST_NAME} in {root}")
    try:
        data = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailureError(f"cannot read manifest: {exc}") from exc
    manifest = DatasetManifest.from_dict(data)

    # Cheap structural validation up front: files exist with the right sizes.
    for v in manifest.videos:
        pose_path = _resolve_inside(root, v.pose_path)
        feat_path = _resolve_inside(root, v.feature_path)
        if not pose_path.is_file():
            raise MissingFileError(f"missing pose file {pose_path}")
        if not feat_path.is_file():
            raise MissingFileError(f"missing feature file {feat_path}")
        expected_pose = 4 * v.frame_count * manifest.joint_count * 2
        if pose_path.stat().st_size != expected_pose:
            raise ShapeMismatchError(
                f"{pose_path}: expected {expected_pose} bytes, found {pose_path.stat().st_size}"
            )
        expected_feat = 4 * manifest.feature_dim
        if feat_path.stat().st_size != expected_feat:
            raise ShapeMismatchError(
                f"{feat_path}: expected {expected_feat} bytes, found {feat_path.stat().st_size}"
            )
    return Bundle(manifest, root=root)


def write_bundle(bundle: Bundle, directory: str | os.PathLike) -> Path:
    """Write a bundle to disk; tensors round-trip bit-exactly through float32."""
    root = Path(directory)
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailureError(f"cannot create {root}: {exc}") from exc
    for v in bundle.manifest.videos:
        pose = bundle.pose(v.id)
        write_f32(root / v.pose_path, pose.keypoints)
        write_f32(root / "conf" / f"{v.id}.f32", pose.confidence)
        write_f32(root / v.feature_path, bundle.features(v.id))
    payload = json.dumps(bundle.manifest.to_dict(), indent=2, sort_keys=True)
    try:
        (root / MANIFEST_NAME).write_text(payload)
    except OSError as exc:
        raise IoFailureError(f"cannot write manifest: {exc}") from exc
    return root
