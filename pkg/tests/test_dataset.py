"""Tests for labels, splitting, containers and manifests."""

import numpy as np
import pytest

from rgbd_encodings.dataset import (
    DEFAULT_PALETTE,
    ClassLabel,
    DatasetEntry,
    DatasetIndex,
    LabelMap,
    export_planes_png,
    ingest_label_image,
    label_map_to_rgb,
    load_label_png,
    read_container,
    read_container_header,
    read_palette,
    save_label_png,
    split_dataset,
    write_container,
    write_palette,
)
from rgbd_encodings.dataset.container import HEADER_SIZE
from rgbd_encodings.encodings import EncodingKind, MultiChannelImage
from rgbd_encodings.errors import (
    ContainerConsistencyError,
    ContainerFormatError,
    EmptyDatasetError,
    UnknownColorError,
)
from rgbd_encodings.stereo import StereoAlgorithm

SKY = (135, 206, 235)
WATER = (30, 80, 200)
MAGENTA = (255, 0, 255)


def label_image(colors) -> np.ndarray:
    """Helper to build an RGB label image from rows of colour tuples."""
    return np.asarray(colors, dtype=np.uint8)


def make_entries(count: int) -> list[DatasetEntry]:
    """Helper to create manifest entries s000, s001, ..."""
    ids = [f"s{i:03d}" for i in range(count)]
    return [
        DatasetEntry(sample_id=i, left=f"{i}/left.png", right=f"{i}/right.png", label=f"{i}/labels.png")
        for i in ids
    ]


@pytest.fixture
def rgbdha_image(rng) -> MultiChannelImage:
    """Random 6-plane image from SGBM depth."""
    planes = rng.integers(0, 256, size=(6, 5, 7)).astype(np.uint8)
    return MultiChannelImage(planes, kind=EncodingKind.RGBDHA, source=StereoAlgorithm.SGBM)


class TestLabels:
    """Test palette lookup and label images."""

    def test_ingest(self):
        """Test exact colour lookup."""
        labels = ingest_label_image(label_image([[SKY, WATER], [WATER, (0, 0, 0)]]))
        np.testing.assert_array_equal(labels.labels, [[0, 1], [1, 255]])

    def test_unknown_colour_is_ignored(self):
        """Test that colours outside the palette become the ignore label."""
        labels = ingest_label_image(label_image([[SKY, MAGENTA]]))
        np.testing.assert_array_equal(labels.labels, [[ClassLabel.SKY, ClassLabel.IGNORE]])

    def test_unknown_colour_strict(self):
        """Test that strict mode names the first unknown pixel."""
        with pytest.raises(UnknownColorError, match="u=1, v=0"):
            ingest_label_image(label_image([[SKY, MAGENTA]]), strict=True)

    def test_png_round_trip(self, tmp_path):
        """Test that a label map survives its colour PNG."""
        labels = LabelMap(np.array([[0, 1, 2], [3, 4, 5], [255, 5, 0]], dtype=np.uint8))
        path = tmp_path / "labels.png"
        save_label_png(labels, path)
        np.testing.assert_array_equal(load_label_png(path, strict=True).labels, labels.labels)

    def test_palette_file(self, tmp_path):
        """Test that palettes are read back from their text file."""
        path = tmp_path / "palette.txt"
        write_palette(DEFAULT_PALETTE, path)
        assert read_palette(path) == DEFAULT_PALETTE

    def test_palette_comments_and_errors(self, tmp_path):
        """Test that comments are skipped and malformed lines rejected."""
        path = tmp_path / "palette.txt"
        path.write_text("# custom\n\n255,0,255,bush\n", encoding="utf-8")
        assert read_palette(path) == {MAGENTA: ClassLabel.BUSH}
        path.write_text("255,0,bush\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_palette(path)

    def test_custom_palette(self):
        """Test ingestion with a palette mapping two colours to one class."""
        palette = {MAGENTA: ClassLabel.TREE, (250, 0, 250): ClassLabel.TREE}
        labels = ingest_label_image(label_image([[MAGENTA, (250, 0, 250)]]), palette)
        np.testing.assert_array_equal(labels.labels, [[5, 5]])
        rgb = label_map_to_rgb(labels, palette)
        assert tuple(rgb[0, 1]) == MAGENTA

    @pytest.mark.parametrize(("name", "expected"), [
        ("sky", ClassLabel.SKY),
        ("Grass", ClassLabel.GRASS),
        (" tree ", ClassLabel.TREE),
    ])
    def test_from_name(self, name, expected):
        """Test case-insensitive class names."""
        assert ClassLabel.from_name(name) == expected


class TestSplit:
    """Test the seeded train/test split."""

    def test_sizes(self):
        """Test that floor(ratio·n) samples go to train."""
        train, test = split_dataset(list(range(10)), ratio=0.8, seed=0)
        assert (len(train), len(test)) == (8, 2)
        assert sorted(train + test) == list(range(10))

    def test_floor(self):
        """Test rounding down of the train share."""
        train, test = split_dataset(list(range(7)), ratio=0.5, seed=1)
        assert (len(train), len(test)) == (3, 4)

    @pytest.mark.parametrize(("n", "ratio", "expected"), [
        (100, 0.8, (80, 20)),
        (1, 0.8, (0, 1)),
        (100, 0.29, (29, 71)),
        (100, 0.57, (57, 43)),
        (100, 0.58, (58, 42)),
    ])
    def test_decimal_ratios(self, n, ratio, expected):
        """Test that decimal ratios give the exact train share, not one less."""
        train, test = split_dataset(list(range(n)), ratio=ratio, seed=0)
        assert (len(train), len(test)) == expected

    def test_random_partitions(self, rng):
        """Test that random splits are deterministic partitions with a floor-sized train share."""
        for _ in range(200):
            n = int(rng.integers(1, 60))
            ratio = round(float(rng.uniform(0.01, 0.99)), 2)
            seed = int(rng.integers(0, 1000))
            ids = [f"s{i}" for i in range(n)]
            train, test = split_dataset(ids, ratio=ratio, seed=seed)
            assert sorted(train + test) == sorted(ids)
            assert not set(train) & set(test)
            assert len(train) == (round(ratio * 100) * n) // 100
            assert split_dataset(ids, ratio=ratio, seed=seed) == (train, test)

    def test_deterministic(self):
        """Test that a seed always gives the same split and seeds differ."""
        ids = [f"id{i}" for i in range(50)]
        assert split_dataset(ids, seed=4) == split_dataset(ids, seed=4)
        assert split_dataset(ids, seed=4) != split_dataset(ids, seed=5)

    def test_empty(self):
        """Test that an empty dataset cannot be split."""
        with pytest.raises(EmptyDatasetError):
            split_dataset([])

    @pytest.mark.parametrize("ratio", [0.0, 1.0, -0.2, 1.5])
    def test_ratio_bounds(self, ratio):
        """Test that the ratio must lie strictly between 0 and 1."""
        with pytest.raises(ValueError):
            split_dataset([1, 2, 3], ratio=ratio)


class TestContainer:
    """Test the binary container format."""

    def test_round_trip(self, rgbdha_image, tmp_path):
        """Test that planes, kind, source and rig hash are stored."""
        path = write_container(rgbdha_image, tmp_path / "a.rgbd", rig_hash="0123456789abcdef")
        loaded = read_container(path, expected_rig_hash="0123456789abcdef")
        np.testing.assert_array_equal(loaded.planes, rgbdha_image.planes)
        assert loaded.kind == EncodingKind.RGBDHA
        assert loaded.source == StereoAlgorithm.SGBM
        header = read_container_header(path)
        assert (header["width"], header["height"], header["channels"]) == (7, 5, 6)
        assert path.stat().st_size == HEADER_SIZE + 6 * 5 * 7

    def test_rgb_has_no_source(self, rng, tmp_path):
        """Test that plain RGB containers store an empty source."""
        image = MultiChannelImage(rng.integers(0, 256, size=(3, 4, 4)).astype(np.uint8), kind=EncodingKind.RGB)
        loaded = read_container(write_container(image, tmp_path / "rgb.rgbd"))
        assert loaded.source is None
        assert read_container_header(tmp_path / "rgb.rgbd")["rig_hash"] == ""

    def test_truncated_payload(self, rgbdha_image, tmp_path):
        """Test that a short payload is a format error."""
        path = write_container(rgbdha_image, tmp_path / "a.rgbd")
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(ContainerFormatError):
            read_container(path)

    def test_truncated_header(self, tmp_path):
        """Test that a file shorter than the header is a format error."""
        path = tmp_path / "short.rgbd"
        path.write_bytes(b"RGBDENC1\x01")
        with pytest.raises(ContainerFormatError):
            read_container(path)

    def test_bad_magic(self, rgbdha_image, tmp_path):
        """Test that a foreign file is rejected."""
        path = write_container(rgbdha_image, tmp_path / "a.rgbd")
        path.write_bytes(b"NOTMAGIC" + path.read_bytes()[8:])
        with pytest.raises(ContainerFormatError, match="magic"):
            read_container(path)

    def test_channel_count_mismatch(self, rgbdha_image, tmp_path):
        """Test that a header whose channel count disagrees with its kind is inconsistent."""
        path = write_container(rgbdha_image, tmp_path / "a.rgbd")
        raw = bytearray(path.read_bytes())
        raw[18] = 4  # channels byte: magic 8, version 2, width 4, height 4
        path.write_bytes(bytes(raw))
        with pytest.raises(ContainerConsistencyError):
            read_container(path)

    def test_rig_mismatch(self, rgbdha_image, tmp_path):
        """Test that a container from another rig is rejected."""
        path = write_container(rgbdha_image, tmp_path / "a.rgbd", rig_hash="aaaaaaaaaaaaaaaa")
        with pytest.raises(ContainerConsistencyError):
            read_container(path, expected_rig_hash="bbbbbbbbbbbbbbbb")

    def test_missing(self, tmp_path):
        """Test reading a missing container."""
        with pytest.raises(FileNotFoundError):
            read_container(tmp_path / "missing.rgbd")

    def test_export_planes(self, rgbdha_image, tmp_path):
        """Test that depth planes are exported next to the RGB image."""
        written = export_planes_png(rgbdha_image, tmp_path / "sample.png")
        assert [p.name for p in written] == ["sample.png", "sample_D.png", "sample_H.png", "sample_A.png"]
        assert all(p.exists() for p in written)


class TestManifest:
    """Test manifest CSV files."""

    def test_write_and_read(self, tmp_path):
        """Test that entries survive the CSV and resolve against its directory."""
        index = DatasetIndex(entries=make_entries(3), root=tmp_path)
        path = index.write(tmp_path / "manifest.csv")
        loaded = DatasetIndex.read(path)
        assert loaded.entries == index.entries
        assert loaded.resolve("s000/left.png") == tmp_path / "s000" / "left.png"

    def test_optional_columns_dropped_when_empty(self, tmp_path):
        """Test that unused optional columns are not written."""
        index = DatasetIndex(entries=make_entries(2), root=tmp_path)
        assert list(index.to_dataframe().columns) == ["sample_id", "left", "right", "label"]

    def test_split_column(self, tmp_path):
        """Test that with_split assigns every entry and subsets partition them."""
        index = DatasetIndex(entries=make_entries(10), root=tmp_path).with_split(0.8, seed=3)
        assert index.split_seed == 3
        assert len(index.subset("train")) == 8
        assert len(index.subset("test")) == 2
        loaded = DatasetIndex.read(index.write(tmp_path / "split.csv"))
        assert [e.split for e in loaded.entries] == [e.split for e in index.entries]

    def test_duplicate_ids(self):
        """Test that sample ids must be unique."""
        entries = make_entries(2)
        with pytest.raises(ValueError):
            DatasetIndex(entries=[entries[0], entries[0]])

    def test_missing_columns(self, tmp_path):
        """Test that a manifest without the required columns is rejected."""
        path = tmp_path / "bad.csv"
        path.write_text("sample_id,left\na,b\n", encoding="utf-8")
        with pytest.raises(ValueError, match="missing columns"):
            DatasetIndex.read(path)

    def test_empty_manifest(self, tmp_path):
        """Test that a header-only manifest is an empty dataset."""
        path = tmp_path / "empty.csv"
        path.write_text("sample_id,left,right,label\n", encoding="utf-8")
        with pytest.raises(EmptyDatasetError):
            DatasetIndex.read(path)

    def test_missing_manifest(self, tmp_path):
        """Test reading a manifest that does not exist."""
        with pytest.raises(FileNotFoundError):
            DatasetIndex.read(tmp_path / "nope.csv")
