"""Clustered mmWave channel generation for RIS-assisted links.

Model summary. Each hop is a sum of a clustered component and (when visible)
a line-of-sight ray:

* Tx -> surface ``h``/``H``: sub-rays arrive at the surface from the shared
  scatterers with complex fading, element-pattern gain at the arrival
  boresight, and two-leg close-in attenuation; the LOS ray carries a
  distance-dependent visibility indicator, a uniform phase, and the
  element gain toward the Tx. Everything is phased by the surface array
  response; the clustered sum is scaled by 1/sqrt(total sub-ray count).
* Surface -> Rx ``g``/``G``: indoors this hop is modeled as pure LOS
  (placement guarantees visibility); outdoors it gets its own cluster set
  plus a Bernoulli LOS ray.
* Tx -> Rx ``d``/``D``: no surface is involved, so no element pattern and no
  surface steering. Indoors the hop re-views the Tx-side scatterers (same
  fading, re-aimed final leg with an excess phase); outdoors it draws an
  independent set.

Multi-antenna terminals turn each ray's rank-one contribution into an outer
product of the two ends' array responses (plain transpose, no conjugation).
Departure angles at the wall-mounted Tx are geometric; arrival angles at the
mobile Rx are drawn uniformly (azimuth on (-pi, pi], elevation on [0, pi])
from a dedicated stream, so single-antenna outputs are unaffected by the
existence of the multi-antenna code path.

Determinism contract. Every routine draws from generators handed to it, in
a documented fixed order. Each line-of-sight block consumes exactly one
uniform (visibility), one uniform (phase), and, if the scene enables LOS
shadowing, one normal draw, whether or not the ray ends up visible; forced
"on"/"off" modes consume the same draws. :class:`RealizationStreams` names
one substream per purpose so realizations can be generated independently,
in any order, with bitwise-stable results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import element_gain, steering_matrix, steering_vector
from .geometry import Point3, angles_from, distance, distance_2d
from .propagation import los_probability, path_loss
from .scattering import ClusterSet, Link, generate_clusters, share_clusters
from .scene import Scene
from .streams import substream

__all__ = [
    "RealizationStreams",
    "ChannelRealization",
    "gen_h",
    "gen_g",
    "gen_hsiso",
    "gen_mimo",
    "realize",
    "compose_end_to_end",
]


@dataclass
class RealizationStreams:
    """The named substreams consumed by one channel realization.

    ``panel`` tags the surface-specific streams so multi-surface scenes get
    independent draws per surface while the direct link stays common to all
    of them (one physical Tx-Rx path, whatever the surface count).
    """

    clusters_h: np.random.Generator
    clusters_g: np.random.Generator
    clusters_d: np.random.Generator
    h: np.random.Generator
    g: np.random.Generator
    d: np.random.Generator
    rxang_g: np.random.Generator
    rxang_d: np.random.Generator

    @classmethod
    def derive(cls, master_seed: int, index: int, panel: int = 0) -> "RealizationStreams":
        return cls(
            clusters_h=substream(master_seed, "clusters", "txris", panel, index),
            clusters_g=substream(master_seed, "clusters", "risrx", panel, index),
            clusters_d=substream(master_seed, "clusters", "txrx", index),
            h=substream(master_seed, "link", "h", panel, index),
            g=substream(master_seed, "link", "g", panel, index),
            d=substream(master_seed, "link", "d", index),
            rxang_g=substream(master_seed, "rxang", "g", panel, index),
            rxang_d=substream(master_seed, "rxang", "d", index),
        )


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of the three channel matrices of a single-surface scene."""

    H: np.ndarray  # (N, Nt) Tx -> surface
    G: np.ndarray  # (Nr, N) surface -> Rx
    D: np.ndarray  # (Nr, Nt) direct Tx -> Rx
    los: dict[Link, bool]
    index: int = 0

    @property
    def outage_links(self) -> frozenset[Link]:
        """Hops whose matrix came out identically zero (no LOS, no rays)."""
        out = set()
        for link, mat in ((Link.TX_RIS, self.H), (Link.RIS_RX, self.G), (Link.TX_RX, self.D)):
            if not np.any(mat):
                out.add(link)
        return frozenset(out)


def _pattern_gain(scene: Scene, boresight):
    if scene.element_pattern is None:
        return np.ones_like(np.asarray(boresight, dtype=float))
    return element_gain(scene.element_pattern, boresight)

def _los_block(scene: Scene, link: Link, a: Point3, b: Point3, rng, indoor_certain: bool):
    """Visibility, phase, and loss of one LOS ray; fixed draw count.

    Returns (on, phase, loss_linear). ``indoor_certain`` marks the hop whose
    visibility is guaranteed by placement (surface -> Rx indoors).
    """
    u = rng.uniform()
    phase = rng.uniform(0.0, 2.0 * math.pi)
    shadow = rng.standard_normal() if scene.shadow_los else None
    mode = scene.los_mode(link)
    if mode == "on":
        on = True
    elif mode == "off":
        on = False
    else:
        p = 1.0 if indoor_certain else los_probability(distance_2d(a, b), scene.environment.kind)
        on = u < p
    loss = path_loss(
        scene.frequency_hz, distance(a, b), scene.environment.path_loss, los=True, shadow=shadow
    ).linear
    return on, phase, loss

def _cluster_coeff(scene: Scene, clusters: ClusterSet, surface_angles) -> np.ndarray:
    """Per-sub-ray complex amplitude: fading * sqrt(pattern gain * attenuation)."""
    att = clusters.attenuation
    if surface_angles is not None:
        att = att * _pattern_gain(scene, surface_angles.boresight)
    return clusters.fading * np.sqrt(att)

def _uniform_angles(rng, m: int) -> tuple[np.ndarray, np.ndarray]:
    """m arrival directions at the mobile Rx: az U(-pi, pi], el U[0, pi]."""
    az = rng.uniform(-math.pi, math.pi, size=m)
    el = rng.uniform(0.0, math.pi, size=m)
    return az, el

def _gen_h_impl(scene: Scene, clusters: ClusterSet | None, rng) -> tuple[np.ndarray, bool]:
    lam = scene.wavelength
    on, phase, loss = _los_block(scene, Link.TX_RIS, scene.tx, scene.ris, rng, indoor_certain=False)
    ang = angles_from(scene.ris, scene.ris_geometry.orientation, scene.tx)
    h = np.zeros(scene.n, dtype=complex)
    if clusters is not None and clusters.n_subrays:
        a = steering_matrix(
            scene.ris_geometry, clusters.angles_b.azimuth, clusters.angles_b.elevation, lam
        )
        coeff = _cluster_coeff(scene, clusters, clusters.angles_b)
        h = clusters.normalization * (a @ coeff)
    if on:
        amp = math.sqrt(float(_pattern_gain(scene, ang.boresight)) * loss)
        h = h + amp * np.exp(1j * phase) * steering_vector(scene.ris_geometry, ang, lam)
    return h, on

def gen_h(scene: Scene, clusters: ClusterSet | None, rng) -> np.ndarray:
    """Tx -> surface channel vector, shape (N,).

    ``clusters`` is a Tx-surface :class:`ClusterSet` or None for a pure-LOS
    draw. Consumes the LOS block draws from ``rng`` (see module docstring).
    """
    if clusters is not None and clusters.link is not Link.TX_RIS:
        raise ValueError(f"expected a {Link.TX_RIS} cluster set, got {clusters.link}")
    return _gen_h_impl(scene, clusters, rng)[0]

def _gen_g_impl(scene: Scene, clusters: ClusterSet | None, rng) -> tuple[np.ndarray, bool]:
    lam = scene.wavelength
    indoor = scene.environment.indoor
    on, phase, loss = _los_block(
        scene, Link.RIS_RX, scene.ris, scene.rx, rng, indoor_certain=indoor
    )
    ang = angles_from(scene.ris, scene.ris_geometry.orientation, scene.rx)
    g = np.zeros(scene.n, dtype=complex)
    if clusters is not None and clusters.n_subrays:
        a = steering_matrix(
            scene.ris_geometry, clusters.angles_a.azimuth, clusters.angles_a.elevation, lam
        )
        coeff = _cluster_coeff(scene, clusters, clusters.angles_a)
        g = clusters.normalization * (a @ coeff)
    if on:
        amp = math.sqrt(float(_pattern_gain(scene, ang.boresight)) * loss)
        g = g + amp * np.exp(1j * phase) * steering_vector(scene.ris_geometry, ang, lam)
    return g, on

def gen_g(scene: Scene, clusters: ClusterSet | None, rng) -> np.ndarray:
    """Surface -> Rx channel vector, shape (N,).

    Indoors this hop is pure LOS and ``clusters`` must be None; outdoors
    pass a surface-Rx :class:`ClusterSet` (or None for a pure-LOS draw).
    """
    if clusters is not None:
        if scene.environment.indoor:
            raise ValueError("indoor surface->Rx hop is pure LOS; pass clusters=None")
        if clusters.link is not Link.RIS_RX:
            raise ValueError(f"expected a {Link.RIS_RX} cluster set, got {clusters.link}")
    return _gen_g_impl(scene, clusters, rng)[0]

def _gen_hsiso_impl(scene: Scene, clusters: ClusterSet | None, rng) -> tuple[complex, bool]:
    on, phase, loss = _los_block(scene, Link.TX_RX, scene.tx, scene.rx, rng, indoor_certain=False)
    total = 0.0 + 0.0j
    if clusters is not None and clusters.n_subrays:
        coeff = clusters.fading * np.sqrt(clusters.attenuation)
        if clusters.extra_phase is not None:
            coeff = coeff * np.exp(1j * clusters.extra_phase)
        total = clusters.normalization * coeff.sum()
    if on:
        total = total + math.sqrt(loss) * np.exp(1j * phase)
    return complex(total), on

def gen_hsiso(scene: Scene, clusters: ClusterSet | None, rng) -> complex:
    """Direct Tx -> Rx scalar channel (no surface involvement).

    ``clusters`` is a direct-link set: the re-viewed Tx-side set indoors
    (see :func:`rischan.scattering.share_clusters`), an independent one
    outdoors, or None for a pure-LOS draw. No element pattern is applied.
    """
    if clusters is not None and clusters.link is not Link.TX_RX:
        raise ValueError(f"expected a {Link.TX_RX} cluster set, got {clusters.link}")
    return _gen_hsiso_impl(scene, clusters, rng)[0]

def _gen_H_impl(scene: Scene, clusters, rng) -> tuple[np.ndarray, bool]:
    if scene.nt == 1:
        h, on = _gen_h_impl(scene, clusters, rng)
        return h[:, None], on
    lam = scene.wavelength
    on, phase, loss = _los_block(scene, Link.TX_RIS, scene.tx, scene.ris, rng, indoor_certain=False)
    h_mat = np.zeros((scene.n, scene.nt), dtype=complex)
    if clusters is not None and clusters.n_subrays:
        a_sur = steering_matrix(
            scene.ris_geometry, clusters.angles_b.azimuth, clusters.angles_b.elevation, lam
        )
        a_tx = steering_matrix(
            scene.tx_geometry, clusters.angles_a.azimuth, clusters.angles_a.elevation, lam
        )
        coeff = _cluster_coeff(scene, clusters, clusters.angles_b)
        h_mat = clusters.normalization * ((a_sur * coeff) @ a_tx.T)
    if on:
        ang_sur = angles_from(scene.ris, scene.ris_geometry.orientation, scene.tx)
        ang_tx = angles_from(scene.tx, scene.tx_geometry.orientation, scene.ris)
        amp = math.sqrt(float(_pattern_gain(scene, ang_sur.boresight)) * loss)
        h_mat = h_mat + amp * np.exp(1j * phase) * np.outer(
            steering_vector(scene.ris_geometry, ang_sur, lam),
            steering_vector(scene.tx_geometry, ang_tx, lam),
        )
    return h_mat, on

def _gen_G_impl(scene: Scene, clusters, rng, rxang) -> tuple[np.ndarray, bool]:
    if scene.nr == 1:
        g, on = _gen_g_impl(scene, clusters, rng)
        return g[None, :], on
    lam = scene.wavelength
    indoor = scene.environment.indoor
    on, phase, loss = _los_block(
        scene, Link.RIS_RX, scene.ris, scene.rx, rng, indoor_certain=indoor
    )
    m = clusters.n_subrays if clusters is not None else 0
    az, el = _uniform_angles(rxang, m)
    az_los, el_los = _uniform_angles(rxang, 1)
    g_mat = np.zeros((scene.nr, scene.n), dtype=complex)
    if m:
        a_sur = steering_matrix(
            scene.ris_geometry, clusters.angles_a.azimuth, clusters.angles_a.elevation, lam
        )
        a_rx = steering_matrix(scene.rx_geometry, az, el, lam)
        coeff = _cluster_coeff(scene, clusters, clusters.angles_a)
        g_mat = clusters.normalization * ((a_rx * coeff) @ a_sur.T)
    if on:
        ang_sur = angles_from(scene.ris, scene.ris_geometry.orientation, scene.rx)
        amp = math.sqrt(float(_pattern_gain(scene, ang_sur.boresight)) * loss)
        a_rx_los = steering_matrix(scene.rx_geometry, az_los, el_los, lam)[:, 0]
        g_mat = g_mat + amp * np.exp(1j * phase) * np.outer(
            a_rx_los, steering_vector(scene.ris_geometry, ang_sur, lam)
        )
    return g_mat, on

def _gen_D_impl(scene: Scene, clusters, rng, rxang) -> tuple[np.ndarray, bool]:
    if scene.nt == 1 and scene.nr == 1:
        d, on = _gen_hsiso_impl(scene, clusters, rng)
        return np.array([[d]], dtype=complex), on
    lam = scene.wavelength
    on, phase, loss = _los_block(scene, Link.TX_RX, scene.tx, scene.rx, rng, indoor_certain=False)
    m = clusters.n_subrays if clusters is not None else 0
    az, el = _uniform_angles(rxang, m)
    az_los, el_los = _uniform_angles(rxang, 1)
    d_mat = np.zeros((scene.nr, scene.nt), dtype=complex)
    if m:
        a_tx = steering_matrix(
            scene.tx_geometry, clusters.angles_a.azimuth, clusters.angles_a.elevation, lam
        )
        a_rx = steering_matrix(scene.rx_geometry, az, el, lam)
        coeff = clusters.fading * np.sqrt(clusters.attenuation)
        if clusters.extra_phase is not None:
            coeff = coeff * np.exp(1j * clusters.extra_phase)
        d_mat = clusters.normalization * ((a_rx * coeff) @ a_tx.T)
    if on:
        ang_tx = angles_from(scene.tx, scene.tx_geometry.orientation, scene.rx)
        a_rx_los = steering_matrix(scene.rx_geometry, az_los, el_los, lam)[:, 0]
        d_mat = d_mat + math.sqrt(loss) * np.exp(1j * phase) * np.outer(
            a_rx_los, steering_vector(scene.tx_geometry, ang_tx, lam)
        )
    return d_mat, on

def gen_mimo(
    scene: Scene, streams: RealizationStreams, clustered: bool = True, index: int = 0
) -> ChannelRealization:
    """One full channel realization (H, G, D) from named substreams.

    With ``clustered=False`` all cluster generation is skipped and every hop
    is its LOS component alone (useful for geometry-only studies). When the
    terminals are single-antenna, each matrix is produced by the exact
    vector/scalar code path, so e.g. ``H[:, 0]`` equals :func:`gen_h` run on
    the same streams.
    """
    indoor = scene.environment.indoor
    cl_h = generate_clusters(scene, Link.TX_RIS, streams.clusters_h) if clustered else None
    h_mat, los_h = _gen_H_impl(scene, cl_h, streams.h)

    cl_g = None
    if clustered and not indoor:
        cl_g = generate_clusters(scene, Link.RIS_RX, streams.clusters_g)
    g_mat, los_g = _gen_G_impl(scene, cl_g, streams.g, streams.rxang_g)

    cl_d = None
    if clustered:
        if scene.shares_direct_clusters:
            cl_d = share_clusters(scene, cl_h, streams.clusters_d)
        else:
            cl_d = generate_clusters(scene, Link.TX_RX, streams.clusters_d)
    d_mat, los_d = _gen_D_impl(scene, cl_d, streams.d, streams.rxang_d)

    return ChannelRealization(
        H=h_mat,
        G=g_mat,
        D=d_mat,
        los={Link.TX_RIS: los_h, Link.RIS_RX: los_g, Link.TX_RX: los_d},
        index=index,
    )

def realize(
    scene: Scene, master_seed: int, index: int = 0, panel: int = 0, clustered: bool = True
) -> ChannelRealization:
    """Generate realization ``index`` of a scene from a master seed."""
    streams = RealizationStreams.derive(master_seed, index, panel)
    return gen_mimo(scene, streams, clustered=clustered, index=index)

def compose_end_to_end(realization: ChannelRealization, phases) -> np.ndarray:
    """Effective Rx x Tx channel through the configured surface.

    ``phases`` is a radian vector (or a phase-config object) of length N;
    passing None drops the surface contribution, leaving the direct link.
    """
    h_mat, g_mat, d_mat = realization.H, realization.G, realization.D
    if phases is None:
        return d_mat.copy()
    phi = np.asarray(getattr(phases, "phases", phases), dtype=float)
    n = h_mat.shape[0]
    if phi.shape != (n,):
        raise ValueError(f"phases shape {phi.shape} does not match surface size ({n},)")
    if g_mat.shape[1] != n:
        raise ValueError(f"G has {g_mat.shape[1]} columns but H has {n} rows")
    if d_mat.shape != (g_mat.shape[0], h_mat.shape[1]):
        raise ValueError(
            f"D shape {d_mat.shape} does not match (Nr, Nt)=({g_mat.shape[0]}, {h_mat.shape[1]})"
        )
    return (g_mat * np.exp(1j * phi)[None, :]) @ h_mat + d_mat
