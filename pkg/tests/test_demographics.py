"""Speaker adjustment, aggregation, classification, and snapshot loading."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tokequity.demographics import (
    CountrySeries,
    IncomeClass,
    SpeakerRecord,
    adjust_speakers,
    build_profile,
    build_profiles,
    classify_wealth,
    income_vector,
    load_economy,
    load_growth,
    load_snapshot,
    load_speakers,
    parse_income_class,
    total_speakers,
    weighted_gdp,
)
from tokequity.errors import DataGapError, TransportError, ValidationError
from tokequity.worldbank import (
    GDP_PER_CAPITA,
    WorldBankClient,
    gdp_per_capita,
    growth_fractions,
)


def series(country: str = "X", growth: dict[int, float] | None = None, **kw) -> CountrySeries:
    return CountrySeries(country=country, growth=growth or {}, **kw)


class TestAdjustSpeakers:
    def test_recent_count_passes_through(self):
        rec = SpeakerRecord("eng", "X", 500, ref_year=2023)
        assert adjust_speakers(rec, series()) == 500.0

    def test_count_at_horizon_passes_through(self):
        rec = SpeakerRecord("eng", "X", 500, ref_year=2022)
        assert adjust_speakers(rec, series()) == 500.0

    def test_missing_ref_year_passes_through(self):
        rec = SpeakerRecord("eng", "X", 100, ref_year=None)
        assert adjust_speakers(rec, series()) == 100.0

    def test_two_years_of_one_percent_growth(self):
        rec = SpeakerRecord("eng", "X", 100, ref_year=2020)
        s = series(growth={2021: 0.01, 2022: 0.01})
        assert adjust_speakers(rec, s) == pytest.approx(102.01)

    def test_missing_growth_year_names_the_year(self):
        rec = SpeakerRecord("eng", "X", 100, ref_year=2020)
        s = series(growth={2021: 0.01})
        with pytest.raises(DataGapError, match="2022"):
            adjust_speakers(rec, s)

    def test_negative_count_rejected_at_construction(self):
        with pytest.raises(ValidationError):
            SpeakerRecord("eng", "X", -1)

    def test_implausible_ref_year_rejected(self):
        with pytest.raises(ValidationError):
            SpeakerRecord("eng", "X", 10, ref_year=1800)


class TestAggregates:
    def test_total_is_plain_sum(self):
        assert total_speakers({"A": 100.0, "B": 300.0}) == 400.0

    def test_empty_language_is_a_data_gap(self):
        with pytest.raises(DataGapError, match="no speaker data"):
            total_speakers({})

    def test_weighted_gdp_example(self):
        w = weighted_gdp({"A": 100.0, "B": 300.0}, {"A": 1000.0, "B": 5000.0})
        assert w == pytest.approx(4000.0)

    def test_weighted_gdp_drops_countries_without_gdp(self):
        w = weighted_gdp({"A": 100.0, "B": 300.0}, {"A": 1000.0, "B": None})
        assert w == pytest.approx(1000.0)

    def test_weighted_gdp_with_no_data_is_a_gap(self):
        with pytest.raises(DataGapError, match="GDP"):
            weighted_gdp({"A": 100.0}, {"A": None})

    def test_income_vector_example(self):
        vec = income_vector(
            {"A": 50.0, "B": 150.0},
            {"A": IncomeClass.LOW, "B": IncomeClass.HIGH},
        )
        assert vec[IncomeClass.LOW] == pytest.approx(0.25)
        assert vec[IncomeClass.HIGH] == pytest.approx(0.75)
        assert vec[IncomeClass.LOWER_MIDDLE] == 0.0
        assert vec[IncomeClass.UPPER_MIDDLE] == 0.0

    def test_income_vector_covers_all_four_classes(self):
        vec = income_vector({"A": 1.0}, {"A": IncomeClass.LOW})
        assert set(vec) == set(IncomeClass)

    def test_income_vector_with_no_classes_is_a_gap(self):
        with pytest.raises(DataGapError, match="income class"):
            income_vector({"A": 100.0}, {"A": None})


class TestClassifyWealth:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (0.0, IncomeClass.LOW),
            (1000.0, IncomeClass.LOW),
            (1145.0, IncomeClass.LOW),
            (1145.5, IncomeClass.LOWER_MIDDLE),
            (3000.0, IncomeClass.LOWER_MIDDLE),
            (4515.5, IncomeClass.UPPER_MIDDLE),
            (14005.0, IncomeClass.UPPER_MIDDLE),
            (14005.5, IncomeClass.HIGH),
            (20000.0, IncomeClass.HIGH),
        ],
    )
    def test_thresholds(self, value, expected):
        assert classify_wealth(value) is expected

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            classify_wealth(-1.0)

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("Low", IncomeClass.LOW),
            ("lower-middle", IncomeClass.LOWER_MIDDLE),
            ("Upper middle income", IncomeClass.UPPER_MIDDLE),
            ("HIGH_INCOME", IncomeClass.HIGH),
        ],
    )
    def test_parse_income_class_tolerates_styles(self, text, expected):
        assert parse_income_class(text) is expected

    def test_parse_income_class_rejects_unknown(self):
        with pytest.raises(ValidationError, match="middling"):
            parse_income_class("middling")


counts = st.dictionaries(
    st.sampled_from(list("ABCDEFGH")),
    st.floats(min_value=0.0, max_value=1e9, allow_nan=False),
    min_size=1,
    max_size=8,
)
gdps = st.floats(min_value=0.0, max_value=2e5, allow_nan=False)


class TestProperties:
    """Invariants over randomly generated speaker and indicator data."""

    @settings(max_examples=60, deadline=None)
    @given(counts=counts)
    def test_zero_growth_is_identity(self, counts):
        zero = {year: 0.0 for year in range(2015, 2023)}
        for country, count in counts.items():
            rec = SpeakerRecord("l", country, int(count), ref_year=2015)
            s = series(country, growth=zero)
            assert adjust_speakers(rec, s) == pytest.approx(float(int(count)))

    @settings(max_examples=60, deadline=None)
    @given(counts=counts, data=st.data())
    def test_income_vector_sums_to_one(self, counts, data):
        classes = {
            c: data.draw(st.sampled_from(list(IncomeClass))) for c in counts
        }
        if sum(counts.values()) == 0:
            return
        vec = income_vector(counts, classes)
        assert sum(vec.values()) == pytest.approx(1.0, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(counts=counts, data=st.data())
    def test_income_vector_ignores_country_names(self, counts, data):
        classes = {
            c: data.draw(st.sampled_from(list(IncomeClass))) for c in counts
        }
        if sum(counts.values()) == 0:
            return
        renamed = {c + "'": v for c, v in counts.items()}
        renamed_classes = {c + "'": v for c, v in classes.items()}
        assert income_vector(counts, classes) == income_vector(
            renamed, renamed_classes
        )

    @settings(max_examples=60, deadline=None)
    @given(counts=counts, data=st.data())
    def test_weighted_gdp_bounded_by_contributors(self, counts, data):
        gdp = {c: data.draw(gdps) for c in counts}
        contributing = [gdp[c] for c, v in counts.items() if v > 0]
        if not contributing:
            return
        w = weighted_gdp(counts, gdp)
        assert min(contributing) - 1e-6 <= w <= max(contributing) + 1e-6

    @settings(max_examples=60, deadline=None)
    @given(counts=counts, data=st.data(), scale=st.floats(min_value=0.5, max_value=100.0))
    def test_weighted_gdp_scales_with_gdp(self, counts, data, scale):
        gdp = {c: data.draw(gdps) for c in counts}
        if not any(v > 0 for c, v in counts.items()):
            return
        w = weighted_gdp(counts, gdp)
        scaled = weighted_gdp(counts, {c: g * scale for c, g in gdp.items()})
        assert scaled == pytest.approx(w * scale, rel=1e-9)


class TestBuildProfile:
    def test_foreign_record_rejected(self):
        with pytest.raises(ValidationError, match="passed to profile"):
            build_profile("eng", [SpeakerRecord("fra", "X", 1)], {})

    def test_country_without_series_still_counts(self):
        profile = build_profile("eng", [SpeakerRecord("eng", "X", 10)], {})
        assert profile.total_speakers == 10.0
        assert profile.weighted_gdp is None
        assert profile.income_vector is None
        assert profile.wealth_class is None

    def test_same_country_records_are_summed(self):
        profile = build_profile(
            "eng",
            [SpeakerRecord("eng", "X", 10), SpeakerRecord("eng", "X", 5)],
            {},
        )
        assert profile.adjusted_speakers_by_country == {"X": 15.0}

    def test_indicators_come_from_series(self):
        by_country = {
            "X": series("X", gdp_pc_2022=1000.0, income_class=IncomeClass.LOW),
            "Y": series("Y", gdp_pc_2022=5000.0, income_class=IncomeClass.HIGH),
        }
        profile = build_profile(
            "eng",
            [SpeakerRecord("eng", "X", 100), SpeakerRecord("eng", "Y", 300)],
            by_country,
        )
        assert profile.weighted_gdp == pytest.approx(4000.0)
        assert profile.wealth_class is IncomeClass.LOWER_MIDDLE
        assert profile.income_vector[IncomeClass.HIGH] == pytest.approx(0.75)

    def test_build_profiles_groups_by_language(self):
        records = [
            SpeakerRecord("fra", "X", 1),
            SpeakerRecord("eng", "X", 2),
            SpeakerRecord("eng", "Y", 3),
        ]
        profiles = build_profiles(records, {})
        assert sorted(profiles) == ["eng", "fra"]
        assert profiles["eng"].total_speakers == 5.0


class TestLoaders:
    def write(self, tmp_path: Path, name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_speakers_roundtrip_with_blank_year(self, tmp_path):
        path = self.write(
            tmp_path,
            "speakers.csv",
            "language,country,count,ref_year\neng,USA,100,2020\nkor,PRK,5,\n",
        )
        records = load_speakers(path)
        assert records[0].ref_year == 2020
        assert records[1].ref_year is None

    def test_speakers_missing_column_named(self, tmp_path):
        path = self.write(tmp_path, "s.csv", "language,country,count\neng,USA,1\n")
        with pytest.raises(ValidationError, match="ref_year"):
            load_speakers(path)

    def test_speakers_bad_count_names_line(self, tmp_path):
        path = self.write(
            tmp_path,
            "s.csv",
            "language,country,count,ref_year\neng,USA,many,\n",
        )
        with pytest.raises(ValidationError, match=r":2:"):
            load_speakers(path)

    def test_empty_speaker_file_rejected(self, tmp_path):
        path = self.write(tmp_path, "s.csv", "language,country,count,ref_year\n")
        with pytest.raises(ValidationError, match="no speaker records"):
            load_speakers(path)

    def test_growth_percent_becomes_fraction(self, tmp_path):
        path = self.write(
            tmp_path, "g.csv", "country,year,pop_growth_pct\nIND,2022,0.68\n"
        )
        assert load_growth(path) == {"IND": {2022: pytest.approx(0.0068)}}

    def test_growth_duplicate_year_rejected(self, tmp_path):
        path = self.write(
            tmp_path,
            "g.csv",
            "country,year,pop_growth_pct\nIND,2022,0.68\nIND,2022,0.70\n",
        )
        with pytest.raises(ValidationError, match="duplicate"):
            load_growth(path)

    def test_economy_blanks_mean_unknown(self, tmp_path):
        path = self.write(
            tmp_path,
            "e.csv",
            "country,gdp_pc_2022,income_class\nTWN,,High\nPRK,,\n",
        )
        economy = load_economy(path)
        assert economy["TWN"] == (None, IncomeClass.HIGH)
        assert economy["PRK"] == (None, None)

    def test_economy_duplicate_country_rejected(self, tmp_path):
        path = self.write(
            tmp_path,
            "e.csv",
            "country,gdp_pc_2022,income_class\nIND,1,Low\nIND,2,Low\n",
        )
        with pytest.raises(ValidationError, match="duplicate country IND"):
            load_economy(path)

    def test_growth_sanity_band_catches_percent_values(self):
        with pytest.raises(ValidationError, match="sanity band"):
            series("X", growth={2022: 0.68})


@pytest.fixture(scope="module")
def snapshot():
    root = Path(__file__).resolve().parents[1] / "data" / "demographics"
    return load_snapshot(root)


class TestPackagedSnapshot:
    def test_all_corpus_languages_present(self, snapshot, corpus_dir):
        speakers, series_by_country = snapshot
        profiles = build_profiles(speakers, series_by_country)
        corpus_langs = {p.stem.split("_")[0] for p in corpus_dir.glob("*.dev")}
        assert corpus_langs <= set(profiles)

    def test_every_speaker_country_is_known_or_deliberate(self, snapshot):
        speakers, series_by_country = snapshot
        missing = {r.country for r in speakers} - set(series_by_country)
        # PRK is kept in speaker totals while carrying no indicator data
        assert missing == {"PRK"}

    def test_growth_compounding_applies(self, snapshot):
        speakers, series_by_country = snapshot
        profiles = build_profiles(speakers, series_by_country)
        cod = profiles["fra"].adjusted_speakers_by_country["COD"]
        expected = 51_000_000 * 1.0319 * 1.0316 * 1.0312
        assert cod == pytest.approx(expected)

    def test_unclassified_mass_stays_in_totals(self, snapshot):
        speakers, series_by_country = snapshot
        profiles = build_profiles(speakers, series_by_country)
        kor = profiles["kor"]
        assert kor.total_speakers == pytest.approx(76_600_000)
        assert kor.income_vector[IncomeClass.HIGH] == pytest.approx(1.0)


class _FakeResponse:
    def __init__(self, payload):
        self._payload = payload

    def raise_for_status(self) -> None:
        pass

    def json(self):
        return self._payload


class _FakeSession:
    def __init__(self, payloads):
        self.payloads = list(payloads)
        self.calls: list[dict] = []

    def get(self, url, params=None, timeout=None):
        self.calls.append({"url": url, "params": params})
        return _FakeResponse(self.payloads.pop(0))


def _page(meta: dict, rows: list) -> list:
    return [meta, rows]


class TestWorldBankClient:
    def rows(self, *entries):
        return [
            {"countryiso3code": iso3, "date": str(year), "value": value}
            for iso3, year, value in entries
        ]

    def test_fetch_normalizes_and_paginates(self, tmp_path):
        fake = _FakeSession(
            [
                _page({"pages": 2}, self.rows(("IND", 2022, 2410.9))),
                _page({"pages": 2}, self.rows(("USA", 2022, 77246.7))),
            ]
        )
        client = WorldBankClient(tmp_path, session=fake)
        rows = client.fetch(GDP_PER_CAPITA)
        assert len(fake.calls) == 2
        assert rows == [
            {"country": "IND", "year": 2022, "value": 2410.9},
            {"country": "USA", "year": 2022, "value": 77246.7},
        ]

    def test_aggregate_rows_without_iso3_dropped(self, tmp_path):
        fake = _FakeSession(
            [_page({"pages": 1}, self.rows(("", 2022, 1.0), ("IND", 2022, 2.0)))]
        )
        client = WorldBankClient(tmp_path, session=fake)
        rows = client.fetch(GDP_PER_CAPITA)
        assert [r["country"] for r in rows] == ["IND"]

    def test_cache_short_circuits_network(self, tmp_path):
        fake = _FakeSession([_page({"pages": 1}, self.rows(("IND", 2022, 1.0)))])
        client = WorldBankClient(tmp_path, session=fake)
        first = client.fetch(GDP_PER_CAPITA)
        second = client.fetch(GDP_PER_CAPITA)
        assert first == second
        assert len(fake.calls) == 1

    def test_refresh_bypasses_cache(self, tmp_path):
        fake = _FakeSession(
            [
                _page({"pages": 1}, self.rows(("IND", 2022, 1.0))),
                _page({"pages": 1}, self.rows(("IND", 2022, 2.0))),
            ]
        )
        client = WorldBankClient(tmp_path, session=fake)
        client.fetch(GDP_PER_CAPITA)
        rows = client.fetch(GDP_PER_CAPITA, refresh=True)
        assert rows[0]["value"] == 2.0
        assert len(fake.calls) == 2

    def test_api_error_message_is_transport_error(self, tmp_path):
        fake = _FakeSession([_page({"message": [{"value": "bad date"}]}, [])])
        client = WorldBankClient(tmp_path, session=fake)
        with pytest.raises(TransportError, match="rejected"):
            client.fetch(GDP_PER_CAPITA)

    def test_no_usable_rows_is_transport_error(self, tmp_path):
        fake = _FakeSession([_page({"pages": 1}, [])])
        client = WorldBankClient(tmp_path, session=fake)
        with pytest.raises(TransportError, match="no usable rows"):
            client.fetch(GDP_PER_CAPITA)

    def test_cache_file_is_valid_json(self, tmp_path):
        fake = _FakeSession([_page({"pages": 1}, self.rows(("IND", 2022, 1.0)))])
        WorldBankClient(tmp_path, session=fake).fetch(GDP_PER_CAPITA)
        cached = list(Path(tmp_path).glob("*.json"))
        assert len(cached) == 1
        json.loads(cached[0].read_text("utf-8"))

    def test_gdp_projection_keeps_requested_year(self):
        rows = [
            {"country": "IND", "year": 2022, "value": 2410.9},
            {"country": "IND", "year": 2021, "value": 2238.1},
            {"country": "TWN", "year": 2022, "value": None},
        ]
        assert gdp_per_capita(rows) == {"IND": 2410.9}

    def test_growth_projection_converts_percent(self):
        rows = [
            {"country": "IND", "year": 2022, "value": 0.68},
            {"country": "IND", "year": 2021, "value": 0.80},
            {"country": "TWN", "year": 2022, "value": None},
        ]
        assert growth_fractions(rows) == {
            "IND": {2022: pytest.approx(0.0068), 2021: pytest.approx(0.0080)}
        }
