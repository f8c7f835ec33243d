"""Time bucketing helpers.

Timestamps are stored as UTC instants; day and week boundaries are computed
in the user's fixed timezone offset (profile field, signed minutes).
Weeks start Monday 00:00 local.
"""

from __future__ import annotations

from datetime import date, datetime, time, timedelta, timezone

UTC = timezone.utc

WEEKDAY_NAMES = [
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
]


def utcnow() -> datetime:
    return datetime.now(UTC)


def ensure_utc(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        return dt.replace(tzinfo=UTC)
    return dt.astimezone(UTC)


def to_local(dt: datetime, offset_minutes: int) -> datetime:
    """Naive local wall-clock time for a UTC instant."""
    return ensure_utc(dt).replace(tzinfo=None) + timedelta(minutes=offset_minutes)


def from_local(local: datetime, offset_minutes: int) -> datetime:
    """UTC instant for a naive local wall-clock time."""
    return (local - timedelta(minutes=offset_minutes)).replace(tzinfo=UTC)


def local_day(dt: datetime, offset_minutes: int) -> date:
    return to_local(dt, offset_minutes).date()


def day_start_utc(day: date, offset_minutes: int) -> datetime:
    return from_local(datetime.combine(day, time.min), offset_minutes)


def week_monday(day: date) -> date:
    return day - timedelta(days=day.weekday())


def week_start_utc(dt: datetime, offset_minutes: int) -> datetime:
    monday = week_monday(local_day(dt, offset_minutes))
    return day_start_utc(monday, offset_minutes)


def iso(dt: datetime) -> str:
    return ensure_utc(dt).isoformat().replace("+00:00", "Z")


def parse_iso(value: str) -> datetime:
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    return ensure_utc(datetime.fromisoformat(value))


def parse_hhmm(value: str) -> time:
    hour, _, minute = value.partition(":")
    return time(int(hour), int(minute or 0))


def parse_weekday(name: str) -> int:
    """Weekday index, Monday = 0."""
    try:
        return WEEKDAY_NAMES.index(name.strip().lower())
    except ValueError:
        raise ValueError(f"unknown weekday name: {name!r}") from None
