from typing import Iterable, Optional, Any

import duckdb
import pandas as pd

from ..besttrack.parsers import tracks_to_frame
from ..besttrack.types import CycloneTrackT


class TrackStore:
    """DuckDB view over a set of parsed tracks.

    Points live in table `track_points` (one row per 6-hourly record) and cyclones in
    `cyclones` (one row per track, with its genesis season).
    """

    def __init__(self, tracks: Iterable[CycloneTrackT], database_path: str = ":memory:"):
        """Load tracks into a DuckDB connection.

        Args:
            tracks: Parsed tracks. Tracks without points get no `cyclones` row.
            database_path: DuckDB database file, in memory by default.
        """
        tracks = list(tracks)
        self._conn = duckdb.connect(database_path)
        points = tracks_to_frame(tracks)
        points = points.astype({"lat_deg": "float64", "lon_deg": "float64", "vmax_kt": "int64"})
        points["point_index"] = points.groupby("cyclone_id", sort=False).cumcount()
        cyclones = pd.DataFrame(
            [
                {
                    "cyclone_id": t.cyclone_id,
                    "basin": t.basin.value,
                    "season": t.season,
                    "duration_steps": t.duration_steps,
                }
                for t in tracks
                if t.points
            ],
            columns=["cyclone_id", "basin", "season", "duration_steps"],
        ).astype({"season": "int64", "duration_steps": "int64"})
        self._load_table("track_points", points)
        self._load_table("cyclones", cyclones)

    def _load_table(self, table_name: str, dataframe: pd.DataFrame) -> None:
        self._conn.execute(f"DROP TABLE IF EXISTS {table_name}")
        self._conn.execute(f"CREATE TABLE {table_name} AS SELECT * FROM dataframe")

    def execute_sql(self, sql_query: str, params: Optional[list[Any]] = None) -> pd.DataFrame:
        """Run a query against the `cyclones` and `track_points` tables.

        Args:
            sql_query: SQL text, with `?` placeholders for `params`.
            params: Positional parameters bound to the placeholders.

        Returns:
            The result set as a DataFrame.

        Raises:
            duckdb.Error: If the query is invalid or refers to unknown columns.
        """
        if params:
            return self._conn.execute(sql_query, params).df()
        return self._conn.execute(sql_query).df()

    def season_counts(self) -> pd.DataFrame:
        """Cyclones per season label, oldest first.

        Returns:
            DataFrame with columns `season` and `cyclones`.
        """
        return self.execute_sql(
            "SELECT season, COUNT(*) AS cyclones FROM cyclones GROUP BY season ORDER BY season"
        )

    def basin_counts(self) -> pd.DataFrame:
        """Cyclones per basin code.

        Returns:
            DataFrame with columns `basin` and `cyclones`, ordered by basin.
        """
        return self.execute_sql(
            "SELECT basin, COUNT(*) AS cyclones FROM cyclones GROUP BY basin ORDER BY basin"
        )

    def track_summary(self) -> pd.DataFrame:
        """Per-cyclone duration, season and peak intensity.

        Returns:
            DataFrame with columns `cyclone_id`, `basin`, `season`, `duration_steps` and
            `peak_vmax_kt`, ordered by season then id.
        """
        return self.execute_sql(
            """
            SELECT c.cyclone_id, c.basin, c.season, c.duration_steps,
                   MAX(p.vmax_kt) AS peak_vmax_kt
            FROM cyclones c JOIN track_points p USING (cyclone_id)
            GROUP BY c.cyclone_id, c.basin, c.season, c.duration_steps
            ORDER BY c.season, c.cyclone_id
            """
        )

    def close(self) -> None:
        """Close the DuckDB connection. Later queries raise `duckdb.ConnectionException`."""
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
