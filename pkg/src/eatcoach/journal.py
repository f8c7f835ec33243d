"""Food and water log entries: the substrate for goals and recommendation.

Writes are idempotent on (user_id, turn_id); duplicate turns return the
original entry.  Resolved food entries bump the food's popularity counter,
and edits/deletes keep it consistent (popularity equals the number of
non-deleted resolved entries referencing the food).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime
from typing import Any

from eatcoach import timeutil
from eatcoach.errors import AuthorizationError, NotFoundError, ValidationError
from eatcoach.graph import FoodGraph
from eatcoach.model import MealOccasion
from eatcoach.store import Store


@dataclass
class FoodLogEntry:
    entry_id: str
    user_id: str
    food_id: str | None  # absent -> unresolved raw-text entry
    raw_name: str
    meal_occasion: MealOccasion
    servings: int
    logged_at: datetime
    turn_id: str

    @property
    def unresolved(self) -> bool:
        return self.food_id is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "entry_id": self.entry_id,
            "user_id": self.user_id,
            "food_id": self.food_id,
            "raw_name": self.raw_name,
            "meal_occasion": self.meal_occasion.value,
            "servings": self.servings,
            "logged_at": timeutil.iso(self.logged_at),
            "turn_id": self.turn_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FoodLogEntry":
        return cls(
            entry_id=d["entry_id"],
            user_id=d["user_id"],
            food_id=d.get("food_id"),
            raw_name=d["raw_name"],
            meal_occasion=MealOccasion(d["meal_occasion"]),
            servings=int(d["servings"]),
            logged_at=timeutil.parse_iso(d["logged_at"]),
            turn_id=d["turn_id"],
        )


@dataclass
class WaterLogEntry:
    entry_id: str
    user_id: str
    glasses: int
    logged_at: datetime
    turn_id: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "entry_id": self.entry_id,
            "user_id": self.user_id,
            "glasses": self.glasses,
            "logged_at": timeutil.iso(self.logged_at),
            "turn_id": self.turn_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "WaterLogEntry":
        return cls(
            entry_id=d["entry_id"],
            user_id=d["user_id"],
            glasses=int(d["glasses"]),
            logged_at=timeutil.parse_iso(d["logged_at"]),
            turn_id=d["turn_id"],
        )


def _entry_id(user_id: str, turn_id: str, kind: str) -> str:
    return hashlib.sha1(f"{kind}|{user_id}|{turn_id}".encode()).hexdigest()[:12]


class Journal:
    def __init__(self, store: Store, graph: FoodGraph):
        self.store = store
        self.graph = graph

    # -- helpers -------------------------------------------------------------

    def _tz_offset(self, user_id: str) -> int:
        user = self.store.get("users", (user_id,))
        return int(user["tz_offset_minutes"]) if user else 0

    def _entry_key(self, entry: FoodLogEntry | WaterLogEntry) -> tuple[str, ...]:
        day = timeutil.local_day(entry.logged_at, self._tz_offset(entry.user_id))
        return (entry.user_id, day.isoformat(), timeutil.iso(entry.logged_at), entry.entry_id)

    def _bump_popularity(self, food_id: str, delta: int) -> None:
        count = self.graph.bump_popularity(food_id, delta)
        self.store.put("popularity", (food_id,), {"count": count})

    # -- writes ---------------------------------------------------------------

    def log_food(
        self,
        user_id: str,
        food_id: str | None,
        raw_name: str,
        occasion: MealOccasion | str,
        servings: int,
        at: datetime,
        turn_id: str,
    ) -> FoodLogEntry:
        try:
            occasion = MealOccasion(occasion)
        except ValueError:
            raise ValidationError(f"invalid meal occasion {occasion!r}") from None
        servings = int(servings)
        if servings < 1:
            raise ValidationError("servings must be >= 1")
        if food_id is not None:
            self.graph.food(food_id)  # raises NotFoundError for dangling refs
        if not raw_name:
            raise ValidationError("raw_name must be non-empty")

        with self.store.lock("food_entries"):
            existing = self.store.get("turn_refs", (user_id, turn_id))
            if existing is not None:
                return FoodLogEntry.from_dict(existing["entry"])
            entry = FoodLogEntry(
                entry_id=_entry_id(user_id, turn_id, "food"),
                user_id=user_id,
                food_id=food_id,
                raw_name=raw_name,
                meal_occasion=occasion,
                servings=servings,
                logged_at=timeutil.ensure_utc(at),
                turn_id=turn_id,
            )
            self.store.put("food_entries", self._entry_key(entry), entry.to_dict())
            self.store.put(
                "turn_refs", (user_id, turn_id), {"kind": "food", "entry": entry.to_dict()}
            )
            if food_id is not None:
                self._bump_popularity(food_id, +1)
            return entry

    def log_water(
        self, user_id: str, glasses: int, at: datetime, turn_id: str
    ) -> WaterLogEntry:
        glasses = int(glasses)
        if glasses < 1:
            raise ValidationError("glasses must be >= 1")
        with self.store.lock("water_entries"):
            existing = self.store.get("turn_refs", (user_id, turn_id))
            if existing is not None:
                return WaterLogEntry.from_dict(existing["entry"])
            entry = WaterLogEntry(
                entry_id=_entry_id(user_id, turn_id, "water"),
                user_id=user_id,
                glasses=glasses,
                logged_at=timeutil.ensure_utc(at),
                turn_id=turn_id,
            )
            self.store.put("water_entries", self._entry_key(entry), entry.to_dict())
            self.store.put(
                "turn_refs", (user_id, turn_id), {"kind": "water", "entry": entry.to_dict()}
            )
            return entry

    # -- reads ----------------------------------------------------------------

    def list_entries(
        self,
        user_id: str,
        start: datetime,
        end: datetime,
        occasion: MealOccasion | None = None,
    ) -> list[FoodLogEntry]:
        """Food entries with logged_at in [start, end), ascending."""
        start = timeutil.ensure_utc(start)
        end = timeutil.ensure_utc(end)
        if start > end:
            raise ValidationError("range start must not exceed end")
        out = []
        for _, value in self.store.scan("food_entries", (user_id,)):
            entry = FoodLogEntry.from_dict(value)
            if not (start <= entry.logged_at < end):
                continue
            if occasion is not None and entry.meal_occasion is not occasion:
                continue
            out.append(entry)
        out.sort(key=lambda e: (e.logged_at, e.entry_id))
        return out

    def list_water(
        self, user_id: str, start: datetime, end: datetime
    ) -> list[WaterLogEntry]:
        start = timeutil.ensure_utc(start)
        end = timeutil.ensure_utc(end)
        if start > end:
            raise ValidationError("range start must not exceed end")
        out = []
        for _, value in self.store.scan("water_entries", (user_id,)):
            entry = WaterLogEntry.from_dict(value)
            if start <= entry.logged_at < end:
                out.append(entry)
        out.sort(key=lambda e: (e.logged_at, e.entry_id))
        return out

    def water_total(self, user_id: str, start: datetime, end: datetime) -> int:
        return sum(e.glasses for e in self.list_water(user_id, start, end))

    def _find_food_entry(
        self, user_id: str, entry_id: str
    ) -> tuple[tuple[str, ...], FoodLogEntry]:
        for key, value in self.store.scan("food_entries"):
            if value["entry_id"] == entry_id:
                entry = FoodLogEntry.from_dict(value)
                if entry.user_id != user_id:
                    raise AuthorizationError("entry belongs to another user")
                return key, entry
        raise NotFoundError(f"unknown entry id {entry_id!r}")

    # -- edits ------------------------------------------------------------------

    def edit_entry(
        self, user_id: str, entry_id: str, patch: dict[str, Any]
    ) -> FoodLogEntry:
        allowed = {"meal_occasion", "servings", "food_id", "raw_name"}
        unknown = set(patch) - allowed
        if unknown:
            raise ValidationError(f"unknown patch fields: {sorted(unknown)}")
        with self.store.lock("food_entries"):
            key, entry = self._find_food_entry(user_id, entry_id)
            old_food = entry.food_id
            if "meal_occasion" in patch:
                try:
                    entry.meal_occasion = MealOccasion(patch["meal_occasion"])
                except ValueError:
                    raise ValidationError(
                        f"invalid meal occasion {patch['meal_occasion']!r}"
                    ) from None
            if "servings" in patch:
                servings = int(patch["servings"])
                if servings < 1:
                    raise ValidationError("servings must be >= 1")
                entry.servings = servings
            if "raw_name" in patch:
                if not patch["raw_name"]:
                    raise ValidationError("raw_name must be non-empty")
                entry.raw_name = str(patch["raw_name"])
            if "food_id" in patch:
                new_food = patch["food_id"]
                if new_food is not None:
                    self.graph.food(new_food)
                entry.food_id = new_food
            self.store.put("food_entries", key, entry.to_dict())
            if old_food != entry.food_id:
                if old_food is not None:
                    self._bump_popularity(old_food, -1)
                if entry.food_id is not None:
                    self._bump_popularity(entry.food_id, +1)
            return entry

    def delete_entry(self, user_id: str, entry_id: str) -> None:
        with self.store.lock("food_entries"):
            key, entry = self._find_food_entry(user_id, entry_id)
            self.store.delete("food_entries", key)
            if entry.food_id is not None:
                self._bump_popularity(entry.food_id, -1)

    # -- counters used by scheduling ---------------------------------------------

    def entries_logged_in(self, user_id: str, start: datetime, end: datetime) -> int:
        """Food plus water entry count in [start, end)."""
        return len(self.list_entries(user_id, start, end)) + len(
            self.list_water(user_id, start, end)
        )

    def occasion_logged(
        self, user_id: str, occasion: MealOccasion, start: datetime, end: datetime
    ) -> bool:
        return bool(self.list_entries(user_id, start, end, occasion=occasion))
