"""Service and CLI configuration.

One small JSON file; every field optional.  The ROSA_KB environment
variable overrides the KB path from any source, so a deployment can
point the same config at another file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import IoError, ParseError
from .matching import CompatibilityPolicy, MatchLimits

DEFAULT_LISTEN = "127.0.0.1:8765"


@dataclass(frozen=True)
class Config:
    kb_path: Path = Path("kb.rosa.json")
    listen_address: str = DEFAULT_LISTEN
    default_policy: CompatibilityPolicy | None = None
    match_limits: MatchLimits = field(default_factory=MatchLimits)
    # optional directory of built UI assets to serve at /
    static_dir: Path | None = None

    def __post_init__(self):
        object.__setattr__(self, "kb_path", Path(self.kb_path))
        if self.static_dir is not None:
            object.__setattr__(self, "static_dir", Path(self.static_dir))
        if self.default_policy is not None:
            t = self.default_policy.threshold
            if not (0.0 <= t <= 1.0):
                raise ParseError(f"config: threshold {t} outside [0, 1]")
        if self.match_limits.max_mappings < 1 or self.match_limits.max_cases < 1:
            raise ParseError("config: match limits must be >= 1")

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen_address.rpartition(":")
        if not host or not port.isdigit():
            raise ParseError(
                f"config: listen_address {self.listen_address!r} is not "
                f"host:port")
        return host, int(port)


def _policy_from_doc(doc: Mapping) -> CompatibilityPolicy:
    def pairs(key: str):
        out = []
        for p in doc.get(key, []):
            if not isinstance(p, (list, tuple)) or len(p) != 2:
                raise ParseError(f"config: policy.{key} entries must be pairs")
            out.append((p[0], p[1]))
        return out

    threshold = doc.get("threshold", 0.5)
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise ParseError("config: policy.threshold must be a number")
    return CompatibilityPolicy.build(float(threshold), pairs("allowed_pairs"),
                                     pairs("forbidden_pairs"))


_CONFIG_FIELDS = frozenset(
    {"kb_path", "listen_address", "default_policy", "match_limits",
     "static_dir"})


def load_config(path: str | Path | None = None,
                env: Mapping[str, str] | None = None) -> Config:
    env = os.environ if env is None else env
    doc: dict = {}
    if path is not None:
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read config {path}: {exc}")
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not JSON (line {exc.lineno}: {exc.msg})")
        if not isinstance(doc, dict):
            raise ParseError(f"{path}: expected a JSON object")
        # A typoed key would otherwise fall back to a default silently.
        unknown = sorted(set(doc) - _CONFIG_FIELDS)
        if unknown:
            raise ParseError(f"config: unknown field(s) {', '.join(unknown)}")

    kb_path = env.get("ROSA_KB") or doc.get("kb_path") or "kb.rosa.json"
    limits_doc = doc.get("match_limits", {})
    if not isinstance(limits_doc, dict):
        raise ParseError("config: match_limits must be an object")
    limits = MatchLimits(
        max_mappings=int(limits_doc.get("max_mappings", 64)),
        max_cases=int(limits_doc.get("max_cases", 256)),
    )
    policy_doc = doc.get("default_policy")
    policy = None
    if policy_doc is not None:
        if not isinstance(policy_doc, dict):
            raise ParseError("config: default_policy must be an object")
        policy = _policy_from_doc(policy_doc)
    static_dir = doc.get("static_dir")
    return Config(
        kb_path=Path(kb_path),
        listen_address=doc.get("listen_address", DEFAULT_LISTEN),
        default_policy=policy,
        match_limits=limits,
        static_dir=Path(static_dir) if static_dir else None,
    )
