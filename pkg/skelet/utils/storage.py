import os
import pandas as pd


class StorageManager:
    """Local file access for SKEL/MOVES/TRI documents and CSV reports."""

    def exists(self, path):
        return os.path.exists(path)

    def write_csv(self, df, path):
        self._ensure_parent(path)
        df.to_csv(path, index=False)

    def read_text(self, path):
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()

    def write_text(self, content, path):
        self._ensure_parent(path)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(content)

    @staticmethod
    def _ensure_parent(path):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)


storage = StorageManager()
