#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "citeintent/embedding.hpp"
#include "citeintent/errors.hpp"
#include "test_util.hpp"

using namespace citeintent;
using testutil::TempDir;

TEST_CASE("cosine hand values") {
  WordVector x{"x", {1.0, 0.0}};
  WordVector y{"y", {0.0, 1.0}};
  WordVector d{"d", {2.0, 2.0}};
  WordVector nx{"nx", {-3.0, 0.0}};
  CHECK(cosine(x, y) == doctest::Approx(0.0));
  CHECK(cosine(x, nx) == doctest::Approx(-1.0));
  CHECK(cosine(WordVector{"a", {1.0, 1.0}}, d) == doctest::Approx(1.0));
  CHECK(cosine(WordVector{"a", {3.0, 4.0}}, WordVector{"b", {4.0, 3.0}}) ==
        doctest::Approx(24.0 / 25.0));

  CHECK_THROWS_AS(cosine(x, WordVector{"w", {1.0, 2.0, 3.0}}), ModelError);
  CHECK_THROWS_AS(cosine(x, WordVector{"z", {0.0, 0.0}}), ModelError);
}

TEST_CASE("in-memory embedding validates its table") {
  InMemoryEmbedding table("t", {{"alpha", {1.0, 0.0}}, {"beta", {0.0, 1.0}}});
  CHECK(table.dimension() == 2);
  CHECK(table.embed("alpha")->components == std::vector<double>{1.0, 0.0});
  CHECK_FALSE(table.embed("gamma").has_value());

  CHECK_THROWS_AS(InMemoryEmbedding("t", {}), ModelError);
  CHECK_THROWS_AS(InMemoryEmbedding("t", {{"a", {1.0}}, {"b", {1.0, 2.0}}}), ModelError);
}

TEST_CASE("top_k_similar matches a brute-force oracle on random vectors") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);

  std::map<std::string, std::vector<double>> table;
  std::vector<std::string> candidates;
  for (int i = 0; i < 60; ++i) {
    std::string word = "w" + std::to_string(i);
    table[word] = {coord(gen), coord(gen), coord(gen)};
    candidates.push_back(word);
  }
  table["anchor"] = {coord(gen), coord(gen), coord(gen)};
  InMemoryEmbedding provider("t", table);

  auto brute_force = [&](std::size_t k) {
    WordVector anchor{"anchor", table.at("anchor")};
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& word : candidates) {
      scored.emplace_back(cosine(anchor, WordVector{word, table.at(word)}), word);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
    return out;
  };

  for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{60}, std::size_t{200}}) {
    CHECK(top_k_similar(provider, "anchor", candidates, k) == brute_force(k));
  }
}

TEST_CASE("top_k_similar breaks exact ties lexicographically") {
  InMemoryEmbedding provider("t", {{"anchor", {1.0, 0.0}},
                                   {"zeta", {2.0, 2.0}},
                                   {"alpha", {1.0, 1.0}},
                                   {"mid", {1.0, 0.5}}});
  // zeta and alpha point the same direction: identical cosine, alpha sorts first
  auto top = top_k_similar(provider, "anchor", {"zeta", "alpha", "mid"}, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0] == "mid");
  CHECK(top[1] == "alpha");
  CHECK(top[2] == "zeta");
}

TEST_CASE("top_k_similar skips unembeddable and zero-norm candidates") {
  InMemoryEmbedding provider("t", {{"anchor", {1.0, 0.0}},
                                   {"good", {0.5, 0.5}},
                                   {"null", {0.0, 0.0}}});
  auto top = top_k_similar(provider, "anchor", {"missing", "null", "good"}, 5);
  CHECK(top == std::vector<std::string>{"good"});

  CHECK_THROWS_AS(top_k_similar(provider, "anchor", {"good"}, 0), UsageError);
  CHECK_THROWS_AS(top_k_similar(provider, "missing", {"good"}, 1), ModelError);
  CHECK_THROWS_AS(top_k_similar(provider, "null", {"good"}, 1), ModelError);
}

TEST_CASE("load_text_embedding reads the fixture file with a count/dim header") {
  auto provider = load_text_embedding(FIXTURE_DIR "/toy_vectors.txt");
  CHECK(provider->dimension() == 2);
  CHECK(provider->id().rfind("vectors:", 0) == 0);
  auto bg = provider->embed("background");
  REQUIRE(bg.has_value());
  CHECK(bg->components == std::vector<double>{1.0, 0.0});
  CHECK(provider->embed("technique")->components == std::vector<double>{0.0, 1.0});
  // the header line is not an entry
  CHECK_FALSE(provider->embed("33").has_value());
}

TEST_CASE("load_text_embedding accepts headerless files") {
  TempDir tmp;
  testutil::write_file(tmp.file("plain.txt"), "alpha 1 0\nbeta 0 1\n");
  auto provider = load_text_embedding(tmp.file("plain.txt"));
  CHECK(provider->dimension() == 2);
  CHECK(provider->embed("beta")->components == std::vector<double>{0.0, 1.0});
}

TEST_CASE("load_text_embedding rejects malformed files") {
  TempDir tmp;
  CHECK_THROWS_AS(load_text_embedding(tmp.file("absent.txt")), ModelError);

  testutil::write_file(tmp.file("dim.txt"), "2 3\nalpha 1 0\n");
  CHECK_THROWS_AS(load_text_embedding(tmp.file("dim.txt")), ModelError);

  testutil::write_file(tmp.file("bare.txt"), "alpha 1 0\nbeta\n");
  CHECK_THROWS_AS(load_text_embedding(tmp.file("bare.txt")), ModelError);

  testutil::write_file(tmp.file("empty.txt"), "");
  CHECK_THROWS_AS(load_text_embedding(tmp.file("empty.txt")), ModelError);
}
