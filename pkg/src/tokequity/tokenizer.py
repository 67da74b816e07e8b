"""Byte-level BPE tokenizer driven by published merge-rank vocabularies.

The engine performs inference only: it loads a frozen vocabulary (byte
sequence -> merge rank), splits text with the vocabulary's pre-tokenization
pattern, and greedily merges the lowest-ranked adjacent pair inside each
chunk until no merge applies. Training new vocabularies is out of scope.

Vocabulary files carry one record per line, ``<base64(bytes)> <rank>``.
Each vocabulary ships with a small JSON manifest holding its name, the
vocabulary file name, the pre-tokenization pattern verbatim, and the
special-token table. Two manifests are bundled with the package:
``cl100k_base`` and ``o200k_base``.

Special-token literals appearing in user text are treated as plain bytes
unless the caller explicitly opts in; corpus text must never silently
collapse into control tokens.
"""

from __future__ import annotations

import base64
import binascii
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

import regex

from .errors import ValidationError

TextLike = Union[str, bytes]

BUILTIN_VOCABULARIES = ("cl100k_base", "o200k_base")


@dataclass(frozen=True)
class VocabularyTable:
    """Immutable tokenizer state: merges, special tokens, split pattern.

    Instances are safe to share across threads; encode and decode are pure
    functions of their arguments. Construct through load_vocabulary or
    load_manifest rather than directly, so the invariants below are checked:

      * ranks are unique across merges and special tokens
      * every single byte 0..255 is present as a length-1 key
        (relaxed only for toy tables built with allow_partial_bytes)
    """

    name: str
    merges: dict[bytes, int]
    special_tokens: dict[str, int]
    pattern: str
    _splitter: "regex.Pattern[str]" = field(repr=False, compare=False)
    _special_splitter: "regex.Pattern[str] | None" = field(repr=False, compare=False)
    _decoder: dict[int, bytes] = field(repr=False, compare=False)

    def rank_bytes(self, rank: int) -> bytes | None:
        """Byte sequence for a rank, or None if the rank is unknown."""
        return self._decoder.get(rank)

    def __len__(self) -> int:
        return len(self.merges) + len(self.special_tokens)


@dataclass(frozen=True)
class TokenSequence:
    """Encoded output: token ids plus the byte length of the source text."""

    ids: tuple[int, ...]
    source_len_bytes: int

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class TokenCounts:
    """Per-sentence token counts and their total."""

    per_sentence: tuple[int, ...]
    total: int


def _build_table(
    name: str,
    merges: dict[bytes, int],
    special_tokens: dict[str, int],
    pattern: str,
    allow_partial_bytes: bool,
) -> VocabularyTable:
    seen: dict[int, str] = {}
    for bs, rank in merges.items():
        if rank in seen:
            raise ValidationError(
                f"{name}: duplicate rank {rank} ({seen[rank]} and merge {bs!r})"
            )
        seen[rank] = f"merge {bs!r}"
    for literal, rank in special_tokens.items():
        if rank in seen:
            raise ValidationError(
                f"{name}: duplicate rank {rank} ({seen[rank]} and special {literal!r})"
            )
        seen[rank] = f"special {literal!r}"

    if not allow_partial_bytes:
        missing = [b for b in range(256) if bytes([b]) not in merges]
        if missing:
            shown = ", ".join(f"0x{b:02x}" for b in missing[:8])
            raise ValidationError(
                f"{name}: base alphabet incomplete, {len(missing)} single-byte "
                f"entries missing (first: {shown})"
            )

    try:
        splitter = regex.compile(pattern)
    except regex.error as exc:
        raise ValidationError(f"{name}: pre-tokenization pattern does not compile: {exc}")

    special_splitter = None
    if special_tokens:
        # Longest literal first so overlapping specials resolve deterministically.
        alternation = "|".join(
            regex.escape(lit) for lit in sorted(special_tokens, key=len, reverse=True)
        )
        special_splitter = regex.compile(f"({alternation})")

    decoder = {rank: bs for bs, rank in merges.items()}
    decoder.update({rank: lit.encode("utf-8") for lit, rank in special_tokens.items()})

    return VocabularyTable(
        name=name,
        merges=merges,
        special_tokens=dict(special_tokens),
        pattern=pattern,
        _splitter=splitter,
        _special_splitter=special_splitter,
        _decoder=decoder,
    )


def load_vocabulary(
    path: str | Path,
    pattern: str,
    *,
    name: str | None = None,
    special_tokens: dict[str, int] | None = None,
    allow_partial_bytes: bool = False,
) -> VocabularyTable:
    """Parse a ``<base64(bytes)> <rank>`` vocabulary file into a table.

    Args:
        path: vocabulary file, one record per line, no header.
        pattern: pre-tokenization pattern text, stored verbatim.
        name: table name; defaults to the file stem.
        special_tokens: literal -> rank map appended to the table.
        allow_partial_bytes: accept tables missing part of the 0..255 base
            alphabet. Intended for small hand-written test vocabularies;
            published vocabularies must load with the default False.

    Raises:
        ValidationError: empty file, malformed line, duplicate rank or byte
            sequence (the message names the offending line numbers), missing
            base bytes, or a pattern that does not compile.
    """
    path = Path(path)
    if name is None:
        name = path.stem
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read vocabulary {path}: {exc}")

    merges: dict[bytes, int] = {}
    rank_line: dict[int, int] = {}
    seq_line: dict[bytes, int] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(
                f"{path}:{lineno}: expected '<base64> <rank>', got {len(parts)} fields"
            )
        b64, rank_text = parts
        try:
            seq = base64.b64decode(b64, validate=True)
        except (binascii.Error, ValueError):
            raise ValidationError(f"{path}:{lineno}: malformed base64 {b64.decode('ascii', 'replace')!r}")
        try:
            rank = int(rank_text)
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: malformed rank {rank_text!r}")
        if rank < 0:
            raise ValidationError(f"{path}:{lineno}: negative rank {rank}")
        if rank in rank_line:
            raise ValidationError(
                f"{path}: duplicate rank {rank} on lines {rank_line[rank]} and {lineno}"
            )
        if seq in seq_line:
            raise ValidationError(
                f"{path}: duplicate byte sequence on lines {seq_line[seq]} and {lineno}"
            )
        rank_line[rank] = lineno
        seq_line[seq] = lineno
        merges[seq] = rank

    if not merges:
        raise ValidationError(f"{path}: empty vocabulary")

    return _build_table(name, merges, special_tokens or {}, pattern, allow_partial_bytes)


def load_manifest(path: str | Path) -> VocabularyTable:
    """Load a tokenizer from its JSON manifest.

    The manifest holds name, vocabulary file (relative to the manifest),
    pattern text, and the special-token table.
    """
    path = Path(path)
    try:
        spec = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read tokenizer manifest {path}: {exc}")
    for key in ("name", "vocabulary", "pattern"):
        if key not in spec:
            raise ValidationError(f"{path}: manifest missing field {key!r}")
    return load_vocabulary(
        path.parent / spec["vocabulary"],
        spec["pattern"],
        name=spec["name"],
        special_tokens={str(k): int(v) for k, v in spec.get("special_tokens", {}).items()},
    )


def builtin_manifest_path(name: str) -> Path:
    """Filesystem path of a bundled tokenizer manifest."""
    if name not in BUILTIN_VOCABULARIES:
        known = ", ".join(BUILTIN_VOCABULARIES)
        raise ValidationError(f"unknown bundled vocabulary {name!r} (have: {known})")
    return Path(str(resources.files("tokequity").joinpath(f"data/vocab/{name}.json")))


def builtin_table(name: str) -> VocabularyTable:
    """Load one of the bundled vocabularies by name."""
    return load_manifest(builtin_manifest_path(name))


def pretokenize(text: TextLike, table: VocabularyTable) -> list[bytes]:
    """Split text into the byte chunks that BPE merging operates on.

    Concatenating the chunks reproduces the UTF-8 bytes of the input
    exactly. Special-token literals are not recognized here; they fall
    through the pattern like any other text.
    """
    decoded, _ = _as_str(text)
    return [m.group().encode("utf-8", "surrogateescape") for m in table._splitter.finditer(decoded)]


def _as_str(text: TextLike) -> tuple[str, int]:
    """Normalize input to str for pattern matching; return (str, byte length).

    Raw bytes are mapped through surrogateescape so arbitrary non-UTF-8
    input round-trips losslessly.
    """
    if isinstance(text, bytes):
        return text.decode("utf-8", "surrogateescape"), len(text)
    return text, len(text.encode("utf-8", "surrogateescape"))


def _merge_chunk(chunk: bytes, merges: dict[bytes, int]) -> list[int]:
    """Greedy BPE over one pre-token: always merge the lowest-ranked pair."""
    whole = merges.get(chunk)
    if whole is not None:
        return [whole]
    parts = [chunk[i : i + 1] for i in range(len(chunk))]
    while len(parts) > 1:
        best_rank: int | None = None
        best_at = -1
        for i in range(len(parts) - 1):
            rank = merges.get(parts[i] + parts[i + 1])
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank = rank
                best_at = i
        if best_rank is None:
            break
        parts[best_at : best_at + 2] = [parts[best_at] + parts[best_at + 1]]
    try:
        return [merges[p] for p in parts]
    except KeyError as exc:
        # Reachable only with partial-alphabet toy tables.
        raise ValidationError(
            f"byte sequence {exc.args[0]!r} not in vocabulary (partial base alphabet)"
        )


def encode(
    text: TextLike,
    table: VocabularyTable,
    *,
    match_special: bool = False,
) -> TokenSequence:
    """Encode text (str or raw bytes) into token ids.

    With match_special False (the default) special-token literals inside
    the text are encoded as ordinary bytes. With True, exact occurrences
    of special literals become their reserved single ids.
    """
    decoded, nbytes = _as_str(text)
    ids: list[int] = []
    if match_special and table._special_splitter is not None:
        segments = table._special_splitter.split(decoded)
    else:
        segments = [decoded]
    for seg_index, segment in enumerate(segments):
        if not segment:
            continue
        # split() alternates text and captured special literals.
        if match_special and table._special_splitter is not None and seg_index % 2 == 1:
            ids.append(table.special_tokens[segment])
            continue
        for match in table._splitter.finditer(segment):
            chunk = match.group().encode("utf-8", "surrogateescape")
            ids.extend(_merge_chunk(chunk, table.merges))
    return TokenSequence(ids=tuple(ids), source_len_bytes=nbytes)


def decode(ids: Sequence[int] | TokenSequence, table: VocabularyTable) -> str | bytes:
    """Reassemble token ids into text.

    Returns str when the byte concatenation is valid UTF-8, otherwise the
    raw bytes. Unknown ids raise with the offending position.
    """
    blob = decode_bytes(ids, table)
    try:
        return blob.decode("utf-8")
    except UnicodeDecodeError:
        return blob


def decode_bytes(ids: Sequence[int] | TokenSequence, table: VocabularyTable) -> bytes:
    """Reassemble token ids into raw bytes (surrogateescape-lossless)."""
    if isinstance(ids, TokenSequence):
        ids = ids.ids
    out = bytearray()
    for pos, rank in enumerate(ids):
        bs = table.rank_bytes(rank)
        if bs is None:
            raise ValidationError(f"unknown token id {rank} at position {pos}")
        out += bs
    return bytes(out)


def count_tokens(sentences: Iterable[TextLike], table: VocabularyTable) -> TokenCounts:
    """Token count per sentence plus the corpus total."""
    counts = tuple(len(encode(s, table)) for s in sentences)
    return TokenCounts(per_sentence=counts, total=sum(counts))
