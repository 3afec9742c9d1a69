"""
Sweep ledger
Keeps every sweep and its grid points in SQLite for later inspection
"""
import json
import sqlite3
import uuid
from pathlib import Path
from typing import Dict, List, Optional


class DatabaseManager:
    """Manages the SQLite ledger of sweeps and sweep points"""

    def __init__(self, db_path: str = "output/ledger.db"):
        """Initialize database connection"""
        Path(db_path).parent.mkdir(parents=True, exist_ok=True)

        self.db_path = str(db_path)
        self.conn = None
        self.cursor = None
        self._connect()
        self._create_tables()

    def _connect(self):
        """Connect to SQLite database"""
        self.conn = sqlite3.connect(self.db_path)
        self.conn.row_factory = sqlite3.Row  # Return rows as dictionaries
        self.cursor = self.conn.cursor()

    def _create_tables(self):
        """Create database tables if they don't exist"""

        # Sweeps table
        self.cursor.execute("""
            CREATE TABLE IF NOT EXISTS sweeps (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                sweep_id TEXT UNIQUE NOT NULL,
                config_path TEXT,
                started_at DATETIME DEFAULT CURRENT_TIMESTAMP,
                ended_at DATETIME,
                point_count INTEGER DEFAULT 0
            )
        """)

        # Points table
        self.cursor.execute("""
            CREATE TABLE IF NOT EXISTS points (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                sweep_id TEXT NOT NULL,
                idx INTEGER NOT NULL,
                params TEXT NOT NULL,
                verdict TEXT,
                witness TEXT,
                run_verdict TEXT,
                sup_u REAL,
                mass_margin REAL,
                status TEXT NOT NULL,
                UNIQUE (sweep_id, idx)
            )
        """)

        self.conn.commit()

    def create_sweep(self, config_path: Optional[str] = None, sweep_id: Optional[str] = None) -> str:
        """Register a new sweep and return its id"""
        sweep_id = sweep_id or str(uuid.uuid4())
        self.cursor.execute("""
            INSERT INTO sweeps (sweep_id, config_path)
            VALUES (?, ?)
        """, (sweep_id, config_path))
        self.conn.commit()
        return sweep_id

    def save_point(self, sweep_id: str, row: Dict):
        """Save one regime-map row"""
        self.cursor.execute("""
            INSERT INTO points
            (sweep_id, idx, params, verdict, witness, run_verdict, sup_u, mass_margin, status)
            VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
        """, (
            sweep_id,
            row['idx'],
            json.dumps(row.get('params', {}), sort_keys=True),
            row.get('verdict'),
            row.get('witness'),
            row.get('run_verdict'),
            row.get('sup_u'),
            row.get('mass_margin'),
            row.get('status', 'ok'),
        ))

        # Update sweep point count
        self.cursor.execute("""
            UPDATE sweeps
            SET point_count = point_count + 1
            WHERE sweep_id = ?
        """, (sweep_id,))

        self.conn.commit()

    def end_sweep(self, sweep_id: str):
        """Mark a sweep as ended"""
        self.cursor.execute("""
            UPDATE sweeps
            SET ended_at = CURRENT_TIMESTAMP
            WHERE sweep_id = ?
        """, (sweep_id,))
        self.conn.commit()

    def get_sweep_points(self, sweep_id: str) -> List[Dict]:
        """Get the points of a sweep in grid order"""
        self.cursor.execute("""
            SELECT idx, params, verdict, witness, run_verdict, sup_u, mass_margin, status
            FROM points
            WHERE sweep_id = ?
            ORDER BY idx
        """, (sweep_id,))

        points = []
        for row in self.cursor.fetchall():
            point = dict(row)
            point['params'] = json.loads(point['params'])
            points.append(point)
        return points

    def get_stats(self) -> Dict:
        """Get ledger statistics"""
        self.cursor.execute("SELECT COUNT(*) as total_sweeps FROM sweeps")
        total_sweeps = self.cursor.fetchone()['total_sweeps']

        self.cursor.execute("SELECT COUNT(*) as total_points FROM points")
        total_points = self.cursor.fetchone()['total_points']

        # Verdict breakdown
        self.cursor.execute("""
            SELECT verdict, COUNT(*) as count
            FROM points
            WHERE status = 'ok'
            GROUP BY verdict
        """)
        verdicts = {row['verdict']: row['count'] for row in self.cursor.fetchall()}

        self.cursor.execute("SELECT COUNT(*) as failed FROM points WHERE status != 'ok'")
        failed = self.cursor.fetchone()['failed']

        return {
            'total_sweeps': total_sweeps,
            'total_points': total_points,
            'verdicts': verdicts,
            'failed_points': failed,
        }

    def close(self):
        """Close database connection"""
        if self.conn:
            self.conn.close()
            self.conn = None

    def __del__(self):
        """Cleanup on deletion"""
        self.close()
