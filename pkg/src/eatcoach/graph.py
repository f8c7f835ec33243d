"""Food knowledge graph.

Entity ingestion with deduplication and normalization, category labeling,
trigram fuzzy search, and the two linkage types: food-restaurant
(availability) and food-food (similarity).

The graph is immutable after ingest except for popularity counters, which
the journal maintains.  Similarity edges are precomputed at ingest as
trigram Jaccard >= threshold between canonical names; only pairs touching
newly created entities are recomputed per batch (canonical names never
change, so older pairs are stable).
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from eatcoach import kernels
from eatcoach.errors import NotFoundError, ValidationError
from eatcoach.lexicon import CategoryLexicon
from eatcoach.model import CategoryLabel, FoodSource
from eatcoach.textnorm import normalize_name

logger = logging.getLogger(__name__)

# exact_match tie-break: generic beats restaurant beats packaged
_SOURCE_PRIORITY = {
    FoodSource.GENERIC: 0,
    FoodSource.RESTAURANT: 1,
    FoodSource.PACKAGED: 2,
}

DEFAULT_SEARCH_FLOOR = 0.1
DEFAULT_SIMILARITY_THRESHOLD = 0.4
DEFAULT_SEARCH_LIMIT = 15


def _entity_id(canonical: str, source: FoodSource) -> str:
    return hashlib.sha1(f"food|{canonical}|{source.value}".encode()).hexdigest()[:12]


def _restaurant_id(norm_name: str) -> str:
    return hashlib.sha1(f"rest|{norm_name}".encode()).hexdigest()[:12]


@dataclass
class FoodEntity:
    id: str
    canonical_name: str
    name_variants: set[str]
    source: FoodSource
    description: str | None = None
    price: float | None = None
    review: str | None = None  # opaque, never interpreted
    category_labels: set[CategoryLabel] = field(default_factory=set)
    popularity_count: int = 0


@dataclass
class RestaurantEntity:
    id: str
    name: str
    lat: float
    lon: float
    address: str | None = None
    contact: str | None = None
    cuisine_type: str | None = None


@dataclass
class IngestReport:
    """Counts for one ingest batch.

    ``records_read`` counts well-formed food records, so
    records_read == entities_created + duplicates_merged always holds;
    malformed records are tallied in ``rejected`` separately.
    """

    records_read: int = 0
    entities_created: int = 0
    duplicates_merged: int = 0
    restaurants_created: int = 0
    edges_created: int = 0
    rejected: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "records_read": self.records_read,
            "entities_created": self.entities_created,
            "duplicates_merged": self.duplicates_merged,
            "restaurants_created": self.restaurants_created,
            "edges_created": self.edges_created,
            "rejected": self.rejected,
        }


def _parse_price(value: Any) -> float:
    price = float(value)
    if price < 0 or price != price:  # reject negatives and NaN
        raise ValueError(value)
    return price


class FoodGraph:
    def __init__(
        self,
        lexicon: CategoryLexicon,
        search_floor: float = DEFAULT_SEARCH_FLOOR,
        similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
    ):
        self.lexicon = lexicon
        self.search_floor = search_floor
        self.similarity_threshold = similarity_threshold
        self._foods: dict[str, FoodEntity] = {}
        self._food_by_key: dict[tuple[str, str], str] = {}  # (canonical, source) -> id
        self._restaurants: dict[str, RestaurantEntity] = {}
        self._rest_by_name: dict[str, str] = {}
        self._variant_index: dict[str, set[str]] = {}  # variant -> food ids
        self._availability: set[tuple[str, str]] = set()  # (food_id, restaurant_id)
        self._foods_by_restaurant: dict[str, set[str]] = {}
        self._restaurants_by_food: dict[str, set[str]] = {}
        self._neighbors: dict[str, list[tuple[float, str]]] = {}  # similarity adjacency
        self._sim_edge_count = 0
        # Insertion-ordered id list; index positions feed the pair kernel.
        self._id_order: list[str] = []

    # -- introspection -------------------------------------------------

    @property
    def food_count(self) -> int:
        return len(self._foods)

    @property
    def restaurant_count(self) -> int:
        return len(self._restaurants)

    @property
    def availability_edge_count(self) -> int:
        return len(self._availability)

    @property
    def similarity_edge_count(self) -> int:
        return self._sim_edge_count

    def food(self, food_id: str) -> FoodEntity:
        try:
            return self._foods[food_id]
        except KeyError:
            raise NotFoundError(f"unknown food id {food_id!r}") from None

    def restaurant(self, restaurant_id: str) -> RestaurantEntity:
        try:
            return self._restaurants[restaurant_id]
        except KeyError:
            raise NotFoundError(f"unknown restaurant id {restaurant_id!r}") from None

    def foods(self) -> Iterator[FoodEntity]:
        return iter(self._foods.values())

    # -- ingestion -------------------------------------------------------

    def ingest_records(self, records: Iterable[dict[str, Any]]) -> IngestReport:
        report = IngestReport()
        new_ids: list[str] = []
        for raw in records:
            self._ingest_one(raw, report, new_ids)
        report.edges_created += self._build_similarity_edges(new_ids)
        return report

    def _ingest_one(
        self, raw: Any, report: IngestReport, new_ids: list[str]
    ) -> None:
        parsed = self._validate_record(raw)
        if parsed is None:
            report.rejected += 1
            return
        canonical, variants, source, description, price, review, rest = parsed
        report.records_read += 1

        key = (canonical, source.value)
        existing_id = self._food_by_key.get(key)
        if existing_id is None:
            entity = FoodEntity(
                id=_entity_id(canonical, source),
                canonical_name=canonical,
                name_variants=set(variants),
                source=source,
                description=description,
                price=price,
                review=review,
                category_labels=self.lexicon.labels_for(*variants),
            )
            self._foods[entity.id] = entity
            self._food_by_key[key] = entity.id
            self._id_order.append(entity.id)
            for v in variants:
                self._variant_index.setdefault(v, set()).add(entity.id)
            report.entities_created += 1
            new_ids.append(entity.id)
            food_id = entity.id
        else:
            entity = self._foods[existing_id]
            fresh = variants - entity.name_variants
            if fresh:
                entity.name_variants |= fresh
                for v in fresh:
                    self._variant_index.setdefault(v, set()).add(existing_id)
                entity.category_labels = self.lexicon.labels_for(*entity.name_variants)
            if entity.description is None and description is not None:
                entity.description = description
            if entity.price is None and price is not None:
                entity.price = price
            if entity.review is None and review is not None:
                entity.review = review
            report.duplicates_merged += 1
            food_id = existing_id

        if rest is not None:
            rid = self._ingest_restaurant(rest, report)
            if rid is not None:
                edge = (food_id, rid)
                if edge not in self._availability:
                    self._availability.add(edge)
                    self._foods_by_restaurant.setdefault(rid, set()).add(food_id)
                    self._restaurants_by_food.setdefault(food_id, set()).add(rid)
                    report.edges_created += 1

    def _validate_record(self, raw: Any):
        if not isinstance(raw, dict):
            return None
        name = raw.get("name")
        if not isinstance(name, str):
            return None
        canonical = normalize_name(name)
        if not canonical:
            return None
        try:
            source = FoodSource(raw.get("source"))
        except ValueError:
            return None
        variants = {canonical}
        extra = raw.get("variants", [])
        if not isinstance(extra, list):
            return None
        for v in extra:
            if not isinstance(v, str):
                return None
            nv = normalize_name(v)
            if nv:
                variants.add(nv)
        description = raw.get("description")
        if description is not None and not isinstance(description, str):
            return None
        review = raw.get("review")
        if review is not None and not isinstance(review, str):
            return None
        price = raw.get("price")
        if price is not None:
            try:
                price = _parse_price(price)
            except (TypeError, ValueError):
                return None
        rest = raw.get("restaurant")
        if rest is not None and not isinstance(rest, dict):
            return None
        return canonical, variants, source, description, price, review, rest

    def _ingest_restaurant(
        self, rest: dict[str, Any], report: IngestReport
    ) -> str | None:
        name = rest.get("name")
        norm = normalize_name(name) if isinstance(name, str) else ""
        try:
            lat = float(rest.get("lat"))
            lon = float(rest.get("lon"))
        except (TypeError, ValueError):
            lat = lon = float("nan")
        if not norm or not (-90 <= lat <= 90) or not (-180 <= lon <= 180):
            logger.warning("dropping availability edge: bad restaurant record %r", rest)
            return None
        rid = self._rest_by_name.get(norm)
        if rid is None:
            entity = RestaurantEntity(
                id=_restaurant_id(norm),
                name=str(name).strip(),
                lat=lat,
                lon=lon,
                address=rest.get("address"),
                contact=rest.get("contact"),
                cuisine_type=rest.get("cuisine"),
            )
            self._restaurants[entity.id] = entity
            self._rest_by_name[norm] = entity.id
            report.restaurants_created += 1
            rid = entity.id
        return rid

    def _build_similarity_edges(self, new_ids: list[str]) -> int:
        if not new_ids:
            return 0
        names = [self._foods[fid].canonical_name for fid in self._id_order]
        index_of = {fid: i for i, fid in enumerate(self._id_order)}
        new_indices = [index_of[fid] for fid in new_ids]
        pairs = kernels.pairs_above(
            names, self.similarity_threshold, only_from=new_indices
        )
        created = 0
        for i, j, score in pairs:
            a, b = self._id_order[i], self._id_order[j]
            self._neighbors.setdefault(a, []).append((score, b))
            self._neighbors.setdefault(b, []).append((score, a))
            created += 1
        self._sim_edge_count += created
        return created

    # -- queries -----------------------------------------------------------

    def exact_match(self, name: str) -> FoodEntity | None:
        norm = normalize_name(name)
        if not norm:
            return None
        ids = self._variant_index.get(norm)
        if not ids:
            return None
        return self._foods[min(ids, key=self._exact_rank_key)]

    def _exact_rank_key(self, food_id: str):
        e = self._foods[food_id]
        return (_SOURCE_PRIORITY[e.source], -e.popularity_count, e.id)

    def search_food(
        self, query: str, limit: int = DEFAULT_SEARCH_LIMIT
    ) -> list[tuple[FoodEntity, float]]:
        """Ranked fuzzy matches: trigram Jaccard against the best variant.

        Exact variant matches score 1.0 and rank first; ties break by
        popularity then canonical name.  Scores below the floor are dropped.
        """
        if limit < 1:
            raise ValidationError("limit must be >= 1")
        norm = normalize_name(query)
        if not norm:
            return []
        variants = list(self._variant_index.keys())
        scores = kernels.score_many(norm, variants)
        best: dict[str, float] = {}
        for variant, score in zip(variants, scores):
            if score < self.search_floor:
                continue
            for fid in self._variant_index[variant]:
                if score > best.get(fid, -1.0):
                    best[fid] = score
        exact_ids = self._variant_index.get(norm, set())

        def rank_key(item: tuple[str, float]):
            fid, score = item
            e = self._foods[fid]
            if fid in exact_ids:
                return (-score, 0, self._exact_rank_key(fid))
            return (-score, 1, (-e.popularity_count, e.canonical_name, e.id))

        ranked = sorted(best.items(), key=rank_key)[:limit]
        return [(self._foods[fid], score) for fid, score in ranked]

    def similar_foods(self, food_id: str, k: int) -> list[FoodEntity]:
        self.food(food_id)
        neighbors = self._neighbors.get(food_id, [])
        ordered = sorted(
            neighbors,
            key=lambda sn: (-sn[0], self._foods[sn[1]].canonical_name, sn[1]),
        )
        return [self._foods[nid] for _, nid in ordered[: max(k, 0)]]

    def similarity_neighbors(self, food_id: str) -> list[tuple[float, str]]:
        self.food(food_id)
        return list(self._neighbors.get(food_id, []))

    def foods_at_restaurant(self, restaurant_id: str) -> list[FoodEntity]:
        self.restaurant(restaurant_id)
        ids = self._foods_by_restaurant.get(restaurant_id, set())
        return sorted(
            (self._foods[fid] for fid in ids),
            key=lambda e: (e.canonical_name, e.id),
        )

    def category_of(self, food_id: str) -> set[CategoryLabel]:
        return set(self.food(food_id).category_labels)

    # -- popularity (maintained by the journal) -----------------------------

    def set_popularity(self, food_id: str, count: int) -> None:
        self.food(food_id).popularity_count = max(0, count)

    def bump_popularity(self, food_id: str, delta: int) -> int:
        entity = self.food(food_id)
        entity.popularity_count = max(0, entity.popularity_count + delta)
        return entity.popularity_count

    def global_popularity(self, k: int) -> list[FoodEntity]:
        """Top-k foods by popularity; ties break by canonical name then id."""
        ordered = sorted(
            self._foods.values(),
            key=lambda e: (-e.popularity_count, e.canonical_name, e.id),
        )
        return ordered[: max(k, 0)]

    # -- stats ---------------------------------------------------------------

    def stats(self) -> dict[str, int]:
        return {
            "foods": self.food_count,
            "restaurants": self.restaurant_count,
            "availability_edges": self.availability_edge_count,
            "similarity_edges": self.similarity_edge_count,
        }


def read_corpus(path: str | Path) -> Iterator[dict[str, Any] | Any]:
    """Line-delimited ingestion records; undecodable lines yield None
    (counted as rejected downstream)."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                yield None
