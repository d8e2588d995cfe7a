"""Deterministic CSV/JSON table writers with atomic replacement."""

import json
import os
import tempfile


def format_value(v):
    """17-significant-digit floats; empty string for missing fields."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".fibspec-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(path, fmt, columns, rows, meta):
    """Write one table plus a metadata block; no partial files remain.

    CSV carries the metadata as '# key = value' comment lines before
    the header; JSON mirrors the same records under {"meta", "columns",
    "rows"}.
    """
    if fmt == "csv":
        lines = [f"# {k} = {format_value(v)}" for k, v in sorted(meta.items())]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(format_value(v) for v in row))
        _atomic_write(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        clean_meta = {k: format_value(v) if isinstance(v, float) else v
                      for k, v in sorted(meta.items())}
        doc = {
            "meta": clean_meta,
            "columns": list(columns),
            "rows": [[None if v is None else
                      (float(format(v, ".17g")) if isinstance(v, float) else v)
                      for v in row] for row in rows],
        }
        _atomic_write(path, json.dumps(doc, indent=1, sort_keys=False) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def read_csv_table(path):
    """Inverse of write_table's CSV flavor: (meta, columns, rows-of-str)."""
    meta = {}
    columns = None
    rows = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return meta, columns or [], rows
