#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cnbt/io.hpp"
#include "support/random_graphs.hpp"

using namespace cnbt;

namespace {

std::string message_of(const std::string& text) {
  std::istringstream in(text);
  try {
    io::read_edge_list(in, "g.tsv");
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(EdgeList, HeaderAndBidirectedPair) {
  std::istringstream in("# n=2\n0\t1\n1\t0\n");
  const DirectedGraph g = io::read_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 2);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(classify_pair(g, 0, 1), PairKind::Bidirected);
}

TEST(EdgeList, VertexCountDefaultsToMaxIdPlusOne) {
  std::istringstream in("# a comment\n\n3\t1\n");
  EXPECT_EQ(io::read_edge_list(in).num_vertices(), 4);
}

TEST(EdgeList, HeaderCanAddIsolatedVertices) {
  std::istringstream in("# n=10\n0\t1\n");
  EXPECT_EQ(io::read_edge_list(in).num_vertices(), 10);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  EXPECT_NE(message_of("# n=3\n0\t1\n2\t2\n").find("g.tsv:3"), std::string::npos);
  EXPECT_NE(message_of("0\t1\n0 1\n").find("g.tsv:2"), std::string::npos);
  EXPECT_NE(message_of("0\t1\n1\tx\n").find("g.tsv:2"), std::string::npos);
  EXPECT_NE(message_of("0\t1\n1\t2\n0\t1\n").find("g.tsv:3: duplicate"), std::string::npos);
  EXPECT_NE(message_of("# n=2\n0\t5\n").find("g.tsv:2"), std::string::npos);
  EXPECT_NE(message_of("# n=abc\n").find("g.tsv:1"), std::string::npos);
  EXPECT_NE(message_of("-1\t0\n").find("g.tsv:1"), std::string::npos);
}

TEST(EdgeList, RoundTripWorkedExampleAndRandomGraphs) {
  std::vector<DirectedGraph> graphs = {cnbt::testing::worked_example_graph(), DirectedGraph(3, {})};
  for (std::uint64_t s = 0; s < 10; ++s) graphs.push_back(cnbt::testing::random_digraph(15, 0.3, s));
  for (const auto& g : graphs) {
    std::stringstream buf;
    io::write_edge_list(g, buf);
    EXPECT_EQ(io::read_edge_list(buf), g);
  }
}

TEST(EdgeList, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "cnbt_io_roundtrip.tsv";
  io::write_edge_list(cnbt::testing::worked_example_graph(), path.string());
  EXPECT_EQ(io::read_edge_list(path.string()), cnbt::testing::worked_example_graph());
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_edge_list(path.string()), InvalidInput);
}

TEST(Labels, ReadWrite) {
  std::stringstream buf;
  io::write_labels({2, 0, 1, 1}, buf);
  EXPECT_EQ(io::read_labels(buf), (std::vector<int>{2, 0, 1, 1}));
  std::istringstream bad("1\nfoo\n");
  try {
    io::read_labels(bad, "l.txt");
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("l.txt:2"), std::string::npos);
  }
}
