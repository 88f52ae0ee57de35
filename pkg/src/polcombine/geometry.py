"""Two-ray link geometry between an airborne transmitter and a ground receiver.

Coordinates
-----------
The ground frame ``(x, y, z)`` has its origin on the reflecting plane directly
below the transmitter, ``z`` up and ``x`` pointing along the ground toward the
receiver. The receiver frame ``(x', y', z')`` sits at the receiver feed and is
the ground frame rotated about ``y`` by the elevation angle, so ``x'`` is the
propagation direction of the line-of-sight wave. The feed has dipoles along
``y'`` and ``z'`` only.

Angles are degrees at the API boundary (``Attitude``, ``GeodeticPosition``)
and radians everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

EARTH_RADIUS_M = 6_371_000.0
SPEED_OF_LIGHT = 299_792_458.0
FEET_TO_M = 0.3048


def dms_to_deg(deg: float, minutes: float = 0.0, seconds: float = 0.0, hemisphere: str = "N") -> float:
    """Degrees/minutes/seconds to signed decimal degrees (S and W negative)."""
    value = abs(deg) + minutes / 60.0 + seconds / 3600.0
    return -value if hemisphere.upper() in ("S", "W") else value


def _wrap_deg(angle: float) -> float:
    # maps onto (-180, 180]
    wrapped = math.fmod(angle, 360.0)
    if wrapped <= -180.0:
        wrapped += 360.0
    elif wrapped > 180.0:
        wrapped -= 360.0
    return wrapped


@dataclass(frozen=True)
class GeodeticPosition:
    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise DomainError(f"latitude {self.latitude_deg} outside [-90, 90]")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise DomainError(f"longitude {self.longitude_deg} outside [-180, 180]")
        if not math.isfinite(self.altitude_m):
            raise DomainError("altitude must be finite")


@dataclass(frozen=True)
class Attitude:
    """Aircraft yaw/pitch/roll in degrees, each normalized to (-180, 180]."""

    yaw_deg: float = 0.0
    pitch_deg: float = 0.0
    roll_deg: float = 0.0

    def __post_init__(self):
        for name in ("yaw_deg", "pitch_deg", "roll_deg"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, _wrap_deg(float(value)))

    @property
    def radians(self) -> tuple[float, float, float]:
        return (math.radians(self.yaw_deg), math.radians(self.pitch_deg), math.radians(self.roll_deg))


# Table 1 antenna sites (Edwards AFB area), altitudes in feet AMSL converted to meters.
TABLE1_TX = GeodeticPosition(
    dms_to_deg(35, 5, 0.0, "N"), dms_to_deg(117, 24, 6.73, "W"), 5043 * FEET_TO_M
)
TABLE1_RX = GeodeticPosition(
    dms_to_deg(34, 58, 14.63, "N"), dms_to_deg(117, 55, 52.02, "W"), 2710 * FEET_TO_M
)


def elevation_angle(h_t: float, h_r: float, d_r: float) -> float:
    """Receiver antenna elevation angle toward the transmitter, in radians."""
    if not d_r > 0:
        raise DomainError(f"ground distance must be positive, got {d_r}")
    return math.atan((h_t - h_r) / d_r)


def ground_distance(a: GeodeticPosition, b: GeodeticPosition) -> float:
    """Great-circle distance in meters on a spherical earth (altitudes ignored)."""
    lat1, lat2 = math.radians(a.latitude_deg), math.radians(b.latitude_deg)
    dlat = lat2 - lat1
    dlon = math.radians(b.longitude_deg - a.longitude_deg)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def attitude_matrix(att: Attitude) -> np.ndarray:
    """Body-to-ground rotation ``Rz(yaw) @ Rx(pitch) @ Ry(roll)``."""
    yaw, pitch, roll = att.radians
    return rot_z(yaw) @ rot_x(pitch) @ rot_y(roll)


def body_to_ground(att: Attitude, v) -> np.ndarray:
    return attitude_matrix(att) @ np.asarray(v, dtype=float)


def receiver_frame(theta_e: float) -> np.ndarray:
    """Columns are the x', y', z' unit vectors expressed in ground coordinates."""
    return rot_y(theta_e)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class PathGeometry:
    d_r: float
    h_t: float
    h_r: float
    theta_e: float
    los_length: float
    refl_length: float
    delay_diff_s: float
    grazing_angle: float
    # ground-frame propagation directions
    los_departure: np.ndarray = field(repr=False)
    refl_departure: np.ndarray = field(repr=False)
    refl_arrival: np.ndarray = field(repr=False)
    # transmitter body frame
    los_departure_body: np.ndarray = field(repr=False)
    refl_departure_body: np.ndarray = field(repr=False)
    # receiver (x', y', z') frame
    los_arrival_rx: np.ndarray = field(repr=False)
    refl_arrival_rx: np.ndarray = field(repr=False)
    rx_frame: np.ndarray = field(repr=False)

    @property
    def reflection_point_x(self) -> float:
        return self.d_r * self.h_t / (self.h_t + self.h_r)

    def summary(self) -> dict:
        return {
            "ground_distance_m": self.d_r,
            "tx_height_m": self.h_t,
            "rx_height_m": self.h_r,
            "elevation_angle_rad": self.theta_e,
            "elevation_angle_deg": math.degrees(self.theta_e),
            "los_length_m": self.los_length,
            "refl_length_m": self.refl_length,
            "delay_diff_s": self.delay_diff_s,
            "grazing_angle_rad": self.grazing_angle,
            "grazing_angle_deg": math.degrees(self.grazing_angle),
        }


def path_geometry(d_r: float, h_t: float, h_r: float, attitude: Attitude | None = None) -> PathGeometry:
    """Image-method two-ray geometry over a flat reflecting plane.

    ``h_t`` and ``h_r`` are heights above the plane; ``h_r = 0`` is the
    degenerate case where both rays coincide.
    """
    if not d_r > 0:
        raise DomainError(f"ground distance must be positive, got {d_r}")
    if not h_t > 0:
        raise DomainError(f"transmitter height must be positive, got {h_t}")
    if not h_r >= 0:
        raise DomainError(f"receiver height must be non-negative, got {h_r}")
    attitude = attitude or Attitude()

    theta_e = elevation_angle(h_t, h_r, d_r)
    los_length = math.hypot(d_r, h_t - h_r)
    refl_length = math.hypot(d_r, h_t + h_r)
    grazing = math.atan((h_t + h_r) / d_r)

    los_dep = _unit(np.array([d_r, 0.0, h_r - h_t]))
    refl_dep = np.array([math.cos(grazing), 0.0, -math.sin(grazing)])
    refl_arr = np.array([math.cos(grazing), 0.0, math.sin(grazing)])

    to_body = attitude_matrix(attitude).T
    frame = receiver_frame(theta_e)
    return PathGeometry(
        d_r=d_r,
        h_t=h_t,
        h_r=h_r,
        theta_e=theta_e,
        los_length=los_length,
        refl_length=refl_length,
        delay_diff_s=max(refl_length - los_length, 0.0) / SPEED_OF_LIGHT,
        grazing_angle=grazing,
        los_departure=los_dep,
        refl_departure=refl_dep,
        refl_arrival=refl_arr,
        los_departure_body=to_body @ los_dep,
        refl_departure_body=to_body @ refl_dep,
        los_arrival_rx=frame.T @ los_dep,
        refl_arrival_rx=frame.T @ refl_arr,
        rx_frame=frame,
    )


def two_ray_geometry(cfg) -> PathGeometry:
    """Geometry for a scenario config (anything exposing ``tx``, ``rx``,
    ``attitude`` and ``heights_above_ground()``)."""
    h_t, h_r = cfg.heights_above_ground()
    return path_geometry(ground_distance(cfg.tx, cfg.rx), h_t, h_r, cfg.attitude)
