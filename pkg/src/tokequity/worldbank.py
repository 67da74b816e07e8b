"""Client for the World Bank Indicators API v2 with an on-disk cache.

The API returns JSON pages shaped as ``[metadata, rows]``. Every successful
response is cached to disk keyed by (indicator, countries, date), so later
runs reproduce the same inputs offline. The two indicators used by the
toolkit are GDP per capita in current USD and annual population growth.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

import requests

from .errors import TransportError

GDP_PER_CAPITA = "NY.GDP.PCAP.CD"
POPULATION_GROWTH = "SP.POP.GROW"

_DEFAULT_BASE_URL = "https://api.worldbank.org/v2"


def _cache_name(indicator: str, countries: str, date: str) -> str:
    raw = f"{indicator}.{countries}.{date}.json"
    return re.sub(r"[^A-Za-z0-9._-]", "-", raw)


class WorldBankClient:
    """Fetch indicator rows, caching raw responses on disk.

    Rows are normalized to ``{"country": iso3, "year": int, "value": float|None}``.
    Aggregate rows without an ISO3 code (regional groupings) are dropped.
    """

    def __init__(
        self,
        cache_dir: str | Path,
        *,
        base_url: str = _DEFAULT_BASE_URL,
        session: requests.Session | None = None,
        timeout: float = 30.0,
    ) -> None:
        self.cache_dir = Path(cache_dir)
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()
        self.timeout = timeout

    def fetch(
        self,
        indicator: str,
        *,
        countries: str = "all",
        date: str = "2022",
        refresh: bool = False,
    ) -> list[dict[str, Any]]:
        """Indicator rows for a country selector and date (range) expression."""
        cache_path = self.cache_dir / _cache_name(indicator, countries, date)
        if not refresh and cache_path.exists():
            pages = json.loads(cache_path.read_text("utf-8"))
        else:
            pages = self._fetch_pages(indicator, countries, date)
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            cache_path.write_text(json.dumps(pages), "utf-8")
        return self._normalize(pages, indicator)

    def _fetch_pages(self, indicator: str, countries: str, date: str) -> list[Any]:
        url = f"{self.base_url}/country/{countries}/indicator/{indicator}"
        pages: list[Any] = []
        page = 1
        while True:
            params = {"format": "json", "date": date, "per_page": "20000", "page": str(page)}
            try:
                response = self.session.get(url, params=params, timeout=self.timeout)
                response.raise_for_status()
                payload = response.json()
            except (requests.RequestException, ValueError) as exc:
                raise TransportError(f"World Bank request failed ({indicator}): {exc}")
            if not isinstance(payload, list) or not payload:
                raise TransportError(f"unexpected World Bank payload for {indicator}")
            meta = payload[0]
            if "message" in meta:
                detail = meta["message"]
                raise TransportError(f"World Bank rejected the query: {detail}")
            pages.append(payload)
            if page >= int(meta.get("pages", 1)):
                return pages
            page += 1

    @staticmethod
    def _normalize(pages: list[Any], indicator: str) -> list[dict[str, Any]]:
        rows: list[dict[str, Any]] = []
        for payload in pages:
            if len(payload) < 2 or payload[1] is None:
                continue
            for entry in payload[1]:
                iso3 = entry.get("countryiso3code") or ""
                if len(iso3) != 3:
                    continue
                try:
                    year = int(entry["date"])
                except (KeyError, TypeError, ValueError):
                    continue
                value = entry.get("value")
                rows.append(
                    {
                        "country": iso3,
                        "year": year,
                        "value": float(value) if value is not None else None,
                    }
                )
        if not rows:
            raise TransportError(f"World Bank returned no usable rows for {indicator}")
        return rows


def gdp_per_capita(rows: list[dict[str, Any]], year: int = 2022) -> dict[str, float]:
    """country -> GDP per capita for one year; countries without data omitted."""
    out: dict[str, float] = {}
    for row in rows:
        if row["year"] == year and row["value"] is not None:
            out[row["country"]] = row["value"]
    return out


def growth_fractions(rows: list[dict[str, Any]]) -> dict[str, dict[int, float]]:
    """country -> {year: growth fraction}; API reports percent, we store fractions."""
    out: dict[str, dict[int, float]] = {}
    for row in rows:
        if row["value"] is None:
            continue
        out.setdefault(row["country"], {})[row["year"]] = row["value"] / 100.0
    return out
