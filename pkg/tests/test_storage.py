import pandas as pd

from skelet.utils.storage import StorageManager


def test_text_and_csv_round_trip(tmp_path):
    storage = StorageManager()
    text_path = tmp_path / "nested" / "a.skel"
    storage.write_text("skel v1\n", str(text_path))
    assert storage.exists(str(text_path))
    assert storage.read_text(str(text_path)) == "skel v1\n"

    df = pd.DataFrame({"candidate": [0, 1], "accepted": [True, False]})
    csv_path = tmp_path / "reports" / "census.csv"
    storage.write_csv(df, str(csv_path))
    assert pd.read_csv(str(csv_path)).equals(df)

