"""Scenes with several reflecting surfaces, single-bounce composition.

Each surface contributes one reflected term; the effective channel is the
sum of the per-surface cascades plus the common direct link:

    C = sum_k G_k Phi_k H_k + D

Surface-to-surface re-reflections are not modeled. Every surface draws its
own independent cluster realizations (tagged by panel index), while the
direct link is drawn once from panel-independent streams, so adding or
removing a surface never changes D or the other surfaces' draws. The direct
link always uses an independent cluster set here: re-viewing a shared set
is anchored to one specific surface and is only meaningful in the
single-surface indoor scene.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .arrays import ArrayGeometry, ElementPattern
from .errors import ConfigError
from .geometry import Point3
from .mmwave import RealizationStreams, _gen_D_impl, _gen_G_impl, _gen_H_impl
from .propagation import Environment
from .scattering import Link, ScatteringParams, generate_clusters
from .scene import Scene

__all__ = ["RisPanel", "MultiRisScene", "MultiRisRealization", "realize_multi", "compose_multi"]


@dataclass(frozen=True)
class RisPanel:
    """One reflecting surface: where it is and how it is built."""

    position: Point3
    geometry: ArrayGeometry


@dataclass(frozen=True)
class MultiRisScene:
    """A Tx/Rx pair served by one or more reflecting surfaces."""

    environment: Environment
    frequency_hz: float
    tx: Point3
    rx: Point3
    panels: tuple[RisPanel, ...]
    tx_geometry: ArrayGeometry = ArrayGeometry(1)
    rx_geometry: ArrayGeometry = ArrayGeometry(1)
    element_pattern: ElementPattern | None = field(default_factory=ElementPattern)
    scattering: ScatteringParams = field(default_factory=ScatteringParams)
    los_tx_ris: str = "auto"
    los_ris_rx: str = "auto"
    los_tx_rx: str = "auto"
    shadow_clustered: bool = True
    shadow_los: bool = False

    def __post_init__(self) -> None:
        if not self.panels:
            raise ConfigError("panels: need at least one reflecting surface")
        for k in range(len(self.panels)):
            self.scene_for(k)  # full per-panel validation

    @property
    def n_panels(self) -> int:
        return len(self.panels)

    def scene_for(self, k: int) -> Scene:
        """Single-surface view of panel ``k`` (independent direct clusters)."""
        panel = self.panels[k]
        return Scene(
            environment=self.environment,
            frequency_hz=self.frequency_hz,
            tx=self.tx,
            ris=panel.position,
            rx=self.rx,
            ris_geometry=panel.geometry,
            tx_geometry=self.tx_geometry,
            rx_geometry=self.rx_geometry,
            element_pattern=self.element_pattern,
            scattering=self.scattering,
            share_direct_clusters=False,
            los_tx_ris=self.los_tx_ris,
            los_ris_rx=self.los_ris_rx,
            los_tx_rx=self.los_tx_rx,
            shadow_clustered=self.shadow_clustered,
            shadow_los=self.shadow_los,
        )

    def with_rx(self, rx: Point3) -> "MultiRisScene":
        return replace(self, rx=rx)


@dataclass(frozen=True, eq=False)
class MultiRisRealization:
    """One draw of all per-surface hop pairs plus the common direct link."""

    hops: tuple[tuple[np.ndarray, np.ndarray], ...]  # (H_k, G_k) per panel
    D: np.ndarray
    los_panels: tuple[dict[Link, bool], ...]
    los_direct: bool
    index: int = 0

    @property
    def n_panels(self) -> int:
        return len(self.hops)


def realize_multi(
    mscene: MultiRisScene, master_seed: int, index: int = 0, clustered: bool = True
) -> MultiRisRealization:
    """Generate realization ``index`` of a multi-surface scene.

    Panel k consumes the panel-k streams; the direct link consumes the
    panel-independent streams, so its draw is the same whatever subset of
    panels exists.
    """
    hops = []
    los_panels = []
    for k in range(mscene.n_panels):
        scene_k = mscene.scene_for(k)
        streams = RealizationStreams.derive(master_seed, index, panel=k)
        cl_h = generate_clusters(scene_k, Link.TX_RIS, streams.clusters_h) if clustered else None
        h_mat, los_h = _gen_H_impl(scene_k, cl_h, streams.h)
        cl_g = None
        if clustered and not mscene.environment.indoor:
            cl_g = generate_clusters(scene_k, Link.RIS_RX, streams.clusters_g)
        g_mat, los_g = _gen_G_impl(scene_k, cl_g, streams.g, streams.rxang_g)
        hops.append((h_mat, g_mat))
        los_panels.append({Link.TX_RIS: los_h, Link.RIS_RX: los_g})

    scene_d = mscene.scene_for(0)
    streams_d = RealizationStreams.derive(master_seed, index, panel=0)
    cl_d = generate_clusters(scene_d, Link.TX_RX, streams_d.clusters_d) if clustered else None
    d_mat, los_d = _gen_D_impl(scene_d, cl_d, streams_d.d, streams_d.rxang_d)

    return MultiRisRealization(
        hops=tuple(hops),
        D=d_mat,
        los_panels=tuple(los_panels),
        los_direct=los_d,
        index=index,
    )

def compose_multi(realization: MultiRisRealization, phase_list: Sequence) -> np.ndarray:
    """Effective channel with one phase vector per panel.

    ``phase_list[k]`` is a radian vector (or phase-config object) for panel
    k, or None to leave that panel out of the sum entirely (surface absent
    or switched off).
    """
    if len(phase_list) != realization.n_panels:
        raise ValueError(
            f"phase_list has {len(phase_list)} entries for {realization.n_panels} panels"
        )
    total = realization.D.copy()
    for k, ((h_mat, g_mat), phases) in enumerate(zip(realization.hops, phase_list)):
        if phases is None:
            continue
        phi = np.asarray(getattr(phases, "phases", phases), dtype=float)
        n = h_mat.shape[0]
        if phi.shape != (n,):
            raise ValueError(f"panel {k}: phases shape {phi.shape} does not match ({n},)")
        if g_mat.shape[1] != n:
            raise ValueError(f"panel {k}: G has {g_mat.shape[1]} columns, H has {n} rows")
        total = total + (g_mat * np.exp(1j * phi)[None, :]) @ h_mat
    return total
