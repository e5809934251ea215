"""Line-oriented text storage for newform records.

One record per line, ASCII throughout, no floats and no timestamps, so two
identical runs write byte-identical files.  Lines starting with '#' carry
run metadata.  Records sort by (field label, level norm, level Hermite
form, constituent index) and every parse error names its line.
"""

from fractions import Fraction

from .analysis import NewformRecord

FORMAT_NAME = "hilbert-eigenform-db"
FORMAT_VERSION = 1


class DbFormatError(Exception):
    pass


def _fmt_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def _parse_rational(text, where):
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise DbFormatError("%s: bad rational %r" % (where, text))


def _al_sort_key(label):
    parts = label.split(".")
    return (int(parts[0]), int(parts[1]) if len(parts) > 1 else -1)


def serialize_record(rec):
    """One deterministic ASCII line for a record."""
    al_items = sorted(rec.al_signs.items(), key=lambda kv: _al_sort_key(kv[0]))
    fields = [
        "field=%s" % rec.field_label,
        "disc=%s" % rec.disc_label,
        "level=%s" % rec.level_label,
        "idx=%d" % rec.index,
        "dim=%d" % rec.dim,
        "poly=%s" % ",".join(str(int(c)) for c in rec.poly),
        "primes=%s" % ",".join(rec.prime_labels),
        "eig=%s" % ";".join(
            ",".join(_fmt_rational(c) for c in rec.eigenvalues[lab])
            for lab in rec.prime_labels),
        "al=%s" % ",".join("%s:%d" % (lab, s) for lab, s in al_items),
        "cm=%s" % rec.cm,
        "bc=%s" % rec.bc,
        "v=%s" % rec.version,
        "bound=%d" % rec.prime_bound,
    ]
    return " ".join(fields)


_RECORD_KEYS = ("field", "disc", "level", "idx", "dim", "poly", "primes",
                "eig", "al", "cm", "bc", "v", "bound")


def parse_record(line, lineno):
    """Inverse of serialize_record; errors carry the line number."""
    where = "line %d" % lineno
    got = {}
    for token in line.split(" "):
        if "=" not in token:
            raise DbFormatError("%s: token %r is not key=value" % (where, token))
        key, _, value = token.partition("=")
        if key not in _RECORD_KEYS:
            raise DbFormatError("%s: unknown key %r" % (where, key))
        if key in got:
            raise DbFormatError("%s: duplicate key %r" % (where, key))
        got[key] = value
    missing = [k for k in _RECORD_KEYS if k not in got]
    if missing:
        raise DbFormatError("%s: missing keys %s" % (where, ",".join(missing)))
    try:
        index = int(got["idx"])
        dim = int(got["dim"])
        bound = int(got["bound"])
        poly = tuple(int(t) for t in got["poly"].split(","))
    except ValueError:
        raise DbFormatError("%s: malformed integer field" % where)
    prime_labels = tuple(t for t in got["primes"].split(",") if t)
    eig_parts = [t for t in got["eig"].split(";") if t]
    if len(eig_parts) != len(prime_labels):
        raise DbFormatError(
            "%s: %d eigenvalue entries for %d primes"
            % (where, len(eig_parts), len(prime_labels)))
    eigenvalues = {}
    for lab, part in zip(prime_labels, eig_parts):
        vec = tuple(_parse_rational(t, where) for t in part.split(","))
        if len(vec) != dim:
            raise DbFormatError(
                "%s: eigenvalue at %s has %d coordinates, dim is %d"
                % (where, lab, len(vec), dim))
        eigenvalues[lab] = vec
    al_signs = {}
    if got["al"]:
        for item in got["al"].split(","):
            if ":" not in item:
                raise DbFormatError("%s: bad involution item %r" % (where, item))
            lab, _, sign = item.rpartition(":")
            if sign not in ("1", "-1"):
                raise DbFormatError("%s: involution sign %r" % (where, sign))
            al_signs[lab] = int(sign)
    if len(poly) != dim + 1 or poly[-1] != 1:
        raise DbFormatError("%s: polynomial does not match the dimension" % where)
    return NewformRecord(
        field_label=got["field"], disc_label=got["disc"],
        level_label=got["level"], index=index, dim=dim, poly=poly,
        prime_labels=prime_labels, eigenvalues=eigenvalues,
        al_signs=al_signs, cm=got["cm"], bc=got["bc"], version=got["v"],
        prime_bound=bound)


def write_db(path, meta, records):
    """Write records in canonical order under '#' metadata lines.

    meta maps header names to values; names are emitted in a fixed order
    with unknown names appended alphabetically.
    """
    order = ["field", "disc", "prime-bound", "norms", "engine"]
    lines = ["# %s %d" % (FORMAT_NAME, FORMAT_VERSION)]
    for name in order:
        if name in meta:
            lines.append("# %s %s" % (name, meta[name]))
    for name in sorted(meta):
        if name not in order:
            lines.append("# %s %s" % (name, meta[name]))
    recs = sorted(records, key=lambda r: r.sort_key())
    for rec in recs:
        lines.append(serialize_record(rec))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_db(path):
    """Parse a database file into (meta, records)."""
    meta = {}
    records = []
    with open(path) as fh:
        text = fh.read()
    first = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if first:
                parts = body.split(" ")
                if parts[0] != FORMAT_NAME or parts[1:] != [str(FORMAT_VERSION)]:
                    raise DbFormatError(
                        "line %d: expected header %r version %d"
                        % (lineno, FORMAT_NAME, FORMAT_VERSION))
                first = False
                continue
            name, _, value = body.partition(" ")
            meta[name] = value
            continue
        if first:
            raise DbFormatError("line %d: missing format header" % lineno)
        records.append(parse_record(line, lineno))
    keys = [r.sort_key() for r in records]
    if keys != sorted(keys):
        raise DbFormatError("records are not in canonical order")
    return meta, records
