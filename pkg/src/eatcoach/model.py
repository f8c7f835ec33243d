"""Closed enums shared across modules."""

from __future__ import annotations

import enum


class CategoryLabel(str, enum.Enum):
    """Dietary constituents used for goal tracking."""

    FRUIT_VEG = "fruit_veg"
    RED_PROCESSED_MEAT = "red_processed_meat"
    FISH = "fish"
    ADDED_SUGAR = "added_sugar"
    NUT = "nut"
    WATER = "water"
    OTHER = "other"


class MealOccasion(str, enum.Enum):
    BREAKFAST = "breakfast"
    LUNCH = "lunch"
    DINNER = "dinner"
    SNACK = "snack"


class FoodSource(str, enum.Enum):
    RESTAURANT = "restaurant"
    PACKAGED = "packaged"
    GENERIC = "generic"


class GoalPeriod(str, enum.Enum):
    DAILY = "daily"
    WEEKLY = "weekly"


class GoalDirection(str, enum.Enum):
    AT_LEAST = "at_least"
    AT_MOST = "at_most"
