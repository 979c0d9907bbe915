"""NLoS channel model for light-source -> panel-element -> user links.

Each link is a double Lambertian hop: a light source illuminates one
reflecting/refracting panel element, which re-radiates toward a user's
photodetector.  The DC gain of such a link is a pure geometry/optics
product; no wall reflections or LoS paths enter the model.

All angles cross this module's interfaces in degrees and are converted to
radians in exactly one place (:func:`channel_dc_gain`).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "LinkGeometry",
    "PanelSide",
    "UserPlacement",
    "TETRAHEDRON_PLACEMENTS",
    "channel_dc_gain",
    "reference_room_geometry",
]


def _cos_deg(angle_deg: float) -> float:
    # cos(radians(90)) leaves ~6e-17; the gain is defined as exactly 0 there
    if angle_deg == 90.0:
        return 0.0
    return math.cos(math.radians(angle_deg))


@dataclass(frozen=True)
class LinkGeometry:
    """Geometric and optical quantities of a single LS -> element -> user link.

    Angles are degrees in [0, 90], distances are meters, areas are square
    meters.  ``concentrator_gain`` and ``filter_gain`` are the receiver-side
    optical concentration and filter gains, supplied by the caller as plain
    constants (no concentrator geometry is modeled here).
    """

    lambertian_order: float
    ris_reflectiveness: float
    ris_element_area_m2: float
    photodetector_area_m2: float
    dist_ls_ris_m: float
    dist_ris_user_m: float
    irradiance_angle_ls_ris_deg: float
    irradiance_angle_ris_user_deg: float
    incidence_angle_ris_deg: float
    incidence_angle_user_deg: float
    concentrator_gain: float = 1.0
    filter_gain: float = 1.0

    def __post_init__(self) -> None:
        if self.lambertian_order < 0:
            raise ValueError(
                f"lambertian_order must be >= 0, got {self.lambertian_order}"
            )
        if not 0.0 <= self.ris_reflectiveness <= 1.0:
            raise ValueError(
                f"ris_reflectiveness must be within [0, 1], got {self.ris_reflectiveness}"
            )
        for field in ("ris_element_area_m2", "photodetector_area_m2"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")
        for field in ("dist_ls_ris_m", "dist_ris_user_m"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")
        for field in (
            "irradiance_angle_ls_ris_deg",
            "irradiance_angle_ris_user_deg",
            "incidence_angle_ris_deg",
            "incidence_angle_user_deg",
        ):
            value = getattr(self, field)
            if not 0.0 <= value <= 90.0:
                raise ValueError(f"{field} must be within [0, 90] degrees, got {value}")
        for field in ("concentrator_gain", "filter_gain"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be >= 0, got {getattr(self, field)}")


class PanelSide(enum.Enum):
    """Which side of the panel a user sits on."""

    FRONT = "front"  # served by reflection
    BACK = "back"  # served by refraction


@dataclass(frozen=True)
class UserPlacement:
    """Angular position of a user relative to the panel.

    Descriptive metadata only: link angles are independent inputs of
    :class:`LinkGeometry` and are not derived from the placement.
    """

    azimuth_deg: float
    elevation_deg: float
    side: PanelSide
    description: str = ""

    def __post_init__(self) -> None:
        if not -180.0 < self.azimuth_deg <= 180.0:
            raise ValueError(f"azimuth must lie in (-180, 180], got {self.azimuth_deg}")
        if not -90.0 <= self.elevation_deg <= 90.0:
            raise ValueError(f"elevation must lie in [-90, 90], got {self.elevation_deg}")


#: Reference tetrahedron disposition of eight users around the panel.
#: Values are kept verbatim from the source data; note that D' is listed
#: with the same coordinates as C' there (most likely a sign slip), which
#: is flagged on the entry rather than silently corrected.
TETRAHEDRON_PLACEMENTS: dict[str, UserPlacement] = {
    "A": UserPlacement(31.22, -27.39, PanelSide.FRONT),
    "B": UserPlacement(-31.22, -27.38, PanelSide.FRONT),
    "C": UserPlacement(31.22, 27.39, PanelSide.FRONT),
    "D": UserPlacement(-31.22, 27.39, PanelSide.FRONT),
    "A'": UserPlacement(36.47, -30.33, PanelSide.BACK),
    "B'": UserPlacement(36.47, 30.33, PanelSide.BACK),
    "C'": UserPlacement(-36.47, 30.33, PanelSide.BACK),
    "D'": UserPlacement(
        -36.47,
        30.33,
        PanelSide.BACK,
        description="listed identically to C' in the source data; kept verbatim",
    ),
}


def channel_dc_gain(geom: LinkGeometry) -> float:
    """DC gain of one LS -> element -> user link.

    Computes::

        eta * A_elem * A_pd * (r + 1)
        ----------------------------- * cos^r(th_le) cos(ph_eu) cos(th_e) cos(ph_u) * T * g
              2 pi d_le^2 d_eu^2

    where ``th_le``/``ph_eu`` are the irradiance angles of the two hops,
    ``th_e``/``ph_u`` the incidence angles at the element and the user, and
    ``T``/``g`` the concentrator and filter gains.  The gain is linear in
    the reflectiveness, both areas and both optical gains, and follows an
    inverse-square law in each hop distance.
    """
    prefactor = (
        geom.ris_reflectiveness
        * geom.ris_element_area_m2
        * geom.photodetector_area_m2
        * (geom.lambertian_order + 1.0)
    ) / (2.0 * math.pi * geom.dist_ls_ris_m**2 * geom.dist_ris_user_m**2)
    # 0**0 == 1, so a zeroth Lambertian order ignores the first hop angle
    lambertian = _cos_deg(geom.irradiance_angle_ls_ris_deg) ** geom.lambertian_order
    cosines = (
        lambertian
        * _cos_deg(geom.irradiance_angle_ris_user_deg)
        * _cos_deg(geom.incidence_angle_ris_deg)
        * _cos_deg(geom.incidence_angle_user_deg)
    )
    return prefactor * cosines * geom.concentrator_gain * geom.filter_gain


def reference_room_geometry() -> LinkGeometry:
    """Bundled reference link geometry used by the calibrated presets.

    First-order Lambertian source, half-reflective 0.04 m^2 elements,
    4 cm^2 photodetector, 1.52 m / 2.03 m hops, unity concentrator and
    filter gains.
    """
    return LinkGeometry(
        lambertian_order=1.0,
        ris_reflectiveness=0.5,
        ris_element_area_m2=0.04,
        photodetector_area_m2=4e-4,
        dist_ls_ris_m=1.52,
        dist_ris_user_m=2.03,
        irradiance_angle_ls_ris_deg=45.0,
        irradiance_angle_ris_user_deg=10.0,
        incidence_angle_ris_deg=17.95,
        incidence_angle_user_deg=29.58,
        concentrator_gain=1.0,
        filter_gain=1.0,
    )
