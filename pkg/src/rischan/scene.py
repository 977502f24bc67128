"""Scene description for a single-surface link: who stands where, facing how.

A scene pins down everything deterministic about a simulation: environment,
carrier, terminal and surface positions, array layouts, element pattern, and
the per-hop line-of-sight policy. Randomness enters only through the
generators passed to the channel routines.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .arrays import ArrayGeometry, ElementPattern
from .errors import ConfigError
from .geometry import Plane, Point3, distance
from .propagation import SPEED_OF_LIGHT, Environment, check_frequency
from .scattering import Link, ScatteringParams

__all__ = ["LOS_MODES", "Scene"]

# per-hop visibility policy: distance-dependent Bernoulli, forced on, forced off
LOS_MODES = ("auto", "on", "off")


@dataclass(frozen=True)
class Scene:
    """One Tx / RIS / Rx layout plus all model switches.

    The surface the RIS is mounted on is ``ris_geometry.orientation``; the
    transmitter's mounting (fixing its departure angles) is
    ``tx_geometry.orientation``, broadside +x by default. The receiver is
    mobile and has no fixed orientation. ``element_pattern=None`` makes the
    surface elements isotropic with unit gain.
    """

    environment: Environment
    frequency_hz: float
    tx: Point3
    ris: Point3
    rx: Point3
    ris_geometry: ArrayGeometry
    tx_geometry: ArrayGeometry = ArrayGeometry(1)
    rx_geometry: ArrayGeometry = ArrayGeometry(1)
    element_pattern: ElementPattern | None = field(default_factory=ElementPattern)
    scattering: ScatteringParams = field(default_factory=ScatteringParams)
    share_direct_clusters: bool | None = None  # None: share on indoor scenes
    los_tx_ris: str = "auto"
    los_ris_rx: str = "auto"
    los_tx_rx: str = "auto"
    shadow_clustered: bool = True
    shadow_los: bool = False

    def __post_init__(self) -> None:
        check_frequency(self.frequency_hz)
        for name, mode in (
            ("los_tx_ris", self.los_tx_ris),
            ("los_ris_rx", self.los_ris_rx),
            ("los_tx_rx", self.los_tx_rx),
        ):
            if mode not in LOS_MODES:
                raise ConfigError(f"{name}={mode!r}: expected one of {LOS_MODES}")
        pts = {"tx": self.tx, "ris": self.ris, "rx": self.rx}
        names = list(pts)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                if distance(pts[a], pts[b]) == 0.0:
                    raise ConfigError(f"positions {a} and {b} coincide at {pts[a]}")
        if self.share_direct_clusters and not self.environment.indoor:
            raise ConfigError(
                "share_direct_clusters=True: sharing models an indoor layout; "
                "outdoor scenes use an independent direct-link cluster set"
            )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def n(self) -> int:
        """Number of surface elements."""
        return self.ris_geometry.size

    @property
    def nt(self) -> int:
        return self.tx_geometry.size

    @property
    def nr(self) -> int:
        return self.rx_geometry.size

    @property
    def shares_direct_clusters(self) -> bool:
        """Effective sharing switch (defaults to the environment's layout)."""
        if self.share_direct_clusters is None:
            return self.environment.indoor
        return self.share_direct_clusters

    def los_mode(self, link: Link) -> str:
        return {
            Link.TX_RIS: self.los_tx_ris,
            Link.RIS_RX: self.los_ris_rx,
            Link.TX_RX: self.los_tx_rx,
        }[link]

    def with_rx(self, rx: Point3) -> "Scene":
        """Same scene, receiver moved (used by coverage sweeps)."""
        return replace(self, rx=rx)

    def describe(self) -> str:
        """One-line human summary for logs."""
        g = self.ris_geometry
        side = "xz" if g.orientation.plane is Plane.XZ else "yz"
        return (
            f"{self.environment.kind.value} @ {self.frequency_hz / 1e9:g} GHz, "
            f"N={self.n} ({g.n_h}x{g.n_v} on {side}, facing {g.orientation.facing:+d}), "
            f"Nt={self.nt}, Nr={self.nr}, tx={self.tx}, ris={self.ris}, rx={self.rx}"
        )
