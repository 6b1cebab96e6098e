import json

import pytest

from hgpart.cli import main
from hgpart.formats import read_partition, write_hypergraph

@pytest.fixture
def example_file(tmp_path, h_ex):
    path = tmp_path / "example.dhgr"
    write_hypergraph(h_ex, path)
    return path

class TestPartition:
    def test_writes_outputs(self, tmp_path, example_file, capsys):
        output = tmp_path / "example.part"
        stats = tmp_path / "stats.json"
        code = main([
            "partition", "--input", str(example_file), "--omega", "2", "--delta", "3",
            "--output", str(output), "--stats-json", str(stats),
        ])
        assert code == 0
        assert read_partition(output, num_nodes=4).tolist() == [0, 1, 1, 0]
        record = json.loads(stats.read_text())
        assert record["connectivity"] == 2.0
        assert record["num_partitions"] == 2
        assert record["levels"][0]["num_nodes"] == 4
        assert "connectivity: 2" in capsys.readouterr().out

    def test_kway(self, tmp_path, example_file):
        output = tmp_path / "kway.part"
        assert main(["partition", "-i", str(example_file), "--mode", "kway", "--k", "2", "--epsilon", "0", "-o", str(output)]) == 0
        assert sorted(read_partition(output).tolist()) == [0, 0, 1, 1]

    def test_infeasible(self, example_file, capsys):
        assert main(["partition", "--input", str(example_file), "--omega", "2", "--delta", "1"]) == 1
        assert "infeasible" in capsys.readouterr().err

    def test_zero_omega_is_usage_error(self, example_file):
        assert main(["partition", "--input", str(example_file), "--omega", "0"]) == 2

    def test_kway_without_k(self, example_file, capsys):
        assert main(["partition", "--input", str(example_file), "--mode", "kway"]) == 2
        assert "'k'" in capsys.readouterr().err

    def test_bad_file(self, tmp_path, capsys):
        path = tmp_path / "bad.dhgr"
        path.write_text("1 3\n1 1 9\n")
        assert main(["partition", "--input", str(path), "--omega", "2"]) == 2
        assert "bad.dhgr:2" in capsys.readouterr().err

class TestValidate:
    def test_valid(self, tmp_path, example_file, capsys):
        partition = tmp_path / "example.part"
        partition.write_text("0\n1\n1\n0\n")
        assert main(["validate", "-i", str(example_file), "-p", str(partition), "--omega", "2", "--delta", "3"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["valid"] and report["connectivity"] == 2.0
        assert report["cut_net"] == 2.0 and report["violations"] == []

    def test_invalid(self, tmp_path, example_file, capsys):
        partition = tmp_path / "example.part"
        partition.write_text("0\n0\n1\n1\n")
        assert main(["validate", "-i", str(example_file), "-p", str(partition), "--delta", "2"]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["violations"] == [{"partition": 1, "kind": "inbound", "measured": 3, "limit": 2}]

class TestGenerate:
    def test_pipeline(self, tmp_path, capsys):
        instance = tmp_path / "instance.dhgr"
        output = tmp_path / "instance.part"
        assert main(["generate", "--kind", "smallworld", "--layers", "4", "--width", "10", "--fanout", "2", "--seed", "3", "-o", str(instance)]) == 0
        assert main(["partition", "-i", str(instance), "--omega", "6", "--delta", "20", "-o", str(output)]) == 0
        assert main(["validate", "-i", str(instance), "-p", str(output), "--omega", "6", "--delta", "20"]) == 0

    def test_same_seed_same_file(self, tmp_path):
        first, second = tmp_path / "a.dhgr", tmp_path / "b.dhgr"
        for path in (first, second):
            assert main(["generate", "--layers", "3", "--width", "6", "--max-weight", "4", "-o", str(path)]) == 0
        assert first.read_text() == second.read_text()

class TestBaseline:
    def test_example(self, tmp_path, example_file, capsys):
        output = tmp_path / "baseline.part"
        assert main(["baseline", "-i", str(example_file), "--omega", "2", "--delta", "3", "-o", str(output)]) == 0
        assert read_partition(output).tolist() == [0, 0, 1, 1]
        assert "connectivity: 3" in capsys.readouterr().out

def test_missing_command():
    assert main([]) == 2
