#include <doctest.h>

#include <fstream>
#include <numeric>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/corpus.hpp"
#include "corpusdedup/error.hpp"

namespace fs = std::filesystem;
using namespace corpusdedup;

namespace {

const fs::path kFixtures = CORPUSDEDUP_FIXTURES;

MethodRecord method(std::string_view source) {
  auto r = extract_java_methods(source, "p", "A.java");
  REQUIRE(r.size() == 1);
  return r.front();
}

}  // namespace

TEST_CASE("extract: class without members yields nothing") {
  CHECK(extract_java_methods("class A {}", "p", "A.java").empty());
}

TEST_CASE("extract: single member on one line") {
  const auto r = method("class A { int f(int x){return x;} }");
  CHECK(r.signature_text == "int f(int x)");
  CHECK(r.document.text == "int f(int x){return x;}");
  CHECK(r.document.provenance.start_line == 1);
  CHECK(r.document.provenance.end_line == 1);
  CHECK(r.document.kind == DocKind::java_method);
  CHECK_FALSE(r.parse_error);
}

TEST_CASE("extract: lexer survives literals, comments, generics and annotations") {
  const std::string src = R"(package x;
/** Outer. */
@SuppressWarnings("unchecked")
public class A<T extends Comparable<T>> {
  private String s = "}{";
  private char c = '{';
  // void commented() { }
  /* void blocked() { } */
  String text = """
      { not code }
      """;

  /**
   * Documented.
   */
  @Override
  public <K, V> java.util.Map<K, V> make(java.util.List<? super K> ks) throws Exception {
    String q = "\"}"; char d = '}';
    return null;
  }

  A(int x) { this.s = "ctor"; }

  static { System.out.println("init"); }
  { s = "instance init"; }

  abstract void none();

  Runnable r = new Runnable() { public void run() { } };

  class Inner {
    void inner() { int y = 1; }
  }

  enum E { ONE { void body() {} }; void m() { } }

  record R(int a) {
    R { if (a < 0) throw new IllegalArgumentException(); }
  }

  interface I { default void d() { f(); } void abs(); }
}
)";
  const auto recs = extract_java_methods(src, "p", "A.java");
  std::vector<std::string> sigs;
  for (const auto& r : recs) sigs.push_back(r.signature_text);
  REQUIRE(recs.size() == 6);
  CHECK(sigs[0].find("make(") != std::string::npos);
  CHECK(sigs[0].starts_with("@Override"));
  CHECK(sigs[1] == "A(int x)");
  CHECK(sigs[2] == "void inner()");
  CHECK(sigs[3] == "void m()");
  CHECK(sigs[4] == "R");
  CHECK(sigs[5] == "default void d()");

  const auto& make = recs[0];
  CHECK(make.document.provenance.start_line == 16);
  CHECK(make.document.provenance.end_line == 20);
  REQUIRE(make.doc_comment.has_value());
  CHECK(make.doc_comment->starts_with("/**"));
  CHECK(make.doc_comment_line == 13);
  CHECK(make.document.text.find("Documented") == std::string::npos);

  for (const auto& r : recs) {
    CHECK_FALSE(r.parse_error);
    CHECK(r.document.text.starts_with(r.signature_text));
  }
}

TEST_CASE("extract: corrupt and undecodable files are rejected") {
  CHECK_THROWS_WITH_AS(extract_java_methods("class A { void f() { }", "p", "A.java"), doctest::Contains("UnbalancedBraces"),
                       Error);
  CHECK_THROWS_AS(extract_java_methods("class A { /* never closed", "p", "A.java"), Error);
  try {
    extract_java_methods("class A { void f() { String s = \"\xff\"; } }", "p", "A.java");
    FAIL("expected NotUtf8");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUtf8);
  }
}

TEST_CASE("extract: unbalanced parentheses flag a parse error") {
  const auto recs = extract_java_methods("class A { void f() { g((1); } void h() { g(); } }", "p", "A.java");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].parse_error);
  CHECK_FALSE(recs[1].parse_error);
  CHECK(filter_methods(recs).size() == 1);
}

TEST_CASE("extract: determinism and span validity on the fixture corpus") {
  for (const auto& e : fs::recursive_directory_iterator(kFixtures / "java")) {
    if (e.path().extension() != ".java") continue;
    const auto src = read_file(e.path());
    std::vector<MethodRecord> a, b;
    try {
      a = extract_java_methods(src, "p", e.path().filename().string());
      b = extract_java_methods(src, "p", e.path().filename().string());
    } catch (const Error&) {
      continue;
    }
    REQUIRE(a.size() == b.size());
    std::vector<std::string> lines;
    std::istringstream in(src);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].document == b[i].document);
      const auto& pv = a[i].document.provenance;
      REQUIRE(pv.start_line >= 1);
      REQUIRE(pv.end_line <= lines.size());
      std::string span;
      for (auto l = pv.start_line; l <= pv.end_line; ++l) span += lines[l - 1] + "\n";
      CHECK(span.find(a[i].document.text) != std::string::npos);
    }
  }
}

TEST_CASE("extract: fixture spans equal the reference parser") {
  std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> expected;
  std::map<std::string, std::vector<bool>> expected_empty;
  std::set<std::string> errors;
  std::ifstream in(kFixtures / "java_oracle.tsv");
  for (std::string line; std::getline(in, line);) {
    std::istringstream row(line);
    std::string path, a, b, empty;
    std::getline(row, path, '\t');
    std::getline(row, a, '\t');
    if (a == "ERROR") {
      errors.insert(path);
      continue;
    }
    std::getline(row, b, '\t');
    std::getline(row, empty, '\t');
    expected[path].emplace_back(std::stoul(a), std::stoul(b));
    expected_empty[path].push_back(empty == "1");
  }
  REQUIRE(errors.size() == 7);

  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(kFixtures / "java")) {
    if (e.path().extension() != ".java") continue;
    ++files;
    const auto rel = fs::relative(e.path(), kFixtures / "java").generic_string();
    CAPTURE(rel);
    const auto src = read_file(e.path());
    if (errors.contains(rel)) {
      CHECK_THROWS_AS(extract_java_methods(src, "p", rel), Error);
      continue;
    }
    const auto recs = extract_java_methods(src, "p", rel);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> got;
    std::vector<bool> got_empty;
    for (const auto& r : recs) {
      got.emplace_back(r.document.provenance.start_line, r.document.provenance.end_line);
      got_empty.push_back(has_empty_body(r));
    }
    CHECK(got == expected[rel]);
    CHECK(got_empty == expected_empty[rel]);
  }
  CHECK(files == 100);
}

TEST_CASE("filter_methods drops empty bodies and keeps order") {
  CHECK(filter_methods(extract_java_methods("class A { void f(){} }", "p", "A.java")).empty());
  CHECK(filter_methods(extract_java_methods("class A { void f(){ g(); } }", "p", "A.java")).size() == 1);

  std::string src = "class A {\n";
  const std::set<int> empty = {2, 5, 9};
  for (int i = 0; i < 10; ++i) {
    src += empty.contains(i) ? fmt::format("void m{}() {{ \n\t }}\n", i) : fmt::format("void m{}() {{ call(); }}\n", i);
  }
  src += "}\n";
  const auto all = extract_java_methods(src, "p", "A.java");
  REQUIRE(all.size() == 10);
  const auto kept = filter_methods(all);
  REQUIRE(kept.size() == 7);
  std::vector<std::string> names;
  for (const auto& r : kept) names.push_back(r.signature_text);
  CHECK(names == std::vector<std::string>{"void m0()", "void m1()", "void m3()", "void m4()", "void m6()",
                                          "void m7()", "void m8()"});
  CHECK(filter_methods(kept).size() == kept.size());
}

TEST_CASE("ingest_threads: concatenation, markup and malformed records") {
  std::istringstream in(
      R"({"thread_id": 1, "title": "T", "posts": ["a", "b"]})"
      "\n"
      R"({"thread_id": 2, "title": "T", "posts": []})"
      "\n"
      R"({"thread_id": 3, "title": "Q &amp; A", "posts": ["<p>Use <code>x</code> here</p>"]})"
      "\n"
      R"({"title": "no id", "posts": []})"
      "\n"
      "not json\n"
      R"({"thread_id": 4, "posts": ["no title"]})"
      "\n");
  const auto r = ingest_threads(in);
  REQUIRE(r.documents.size() == 3);
  CHECK(r.skipped == 3);
  CHECK(r.documents[0].text == "T\n\na\n\nb");
  CHECK(r.documents[1].text == "T");
  CHECK(r.documents[2].text == "Q & A\n\nUse x here");
  for (const auto& d : r.documents) {
    CHECK(d.kind == DocKind::discussion_thread);
    CHECK(d.provenance.file_path.empty());
    CHECK(d.provenance.start_line == 0);
    CHECK(d.provenance.end_line == 0);
  }
  CHECK(r.documents[0].provenance.project == "1");

  std::istringstream keep(R"({"thread_id": 3, "title": "T", "posts": ["<code>x</code>"]})");
  CHECK(ingest_threads(keep, ThreadOptions{false}).documents.at(0).text == "T\n\n<code>x</code>");
  CHECK(strip_markup("a < b and <br/>c&lt;d") == "a < b and c<d");
}

TEST_CASE("store: append, trace, save and load") {
  CorpusStore store;
  const auto a = store.append({0, DocKind::java_method, "void f() { x(); }", {"p", "src/A.java", 3, 5}});
  const auto b = store.append({0, DocKind::discussion_thread, "T\n\nwith\ttab", {"77", "", 0, 0}});
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(trace(store, a) == Provenance{"p", "src/A.java", 3, 5});
  CHECK(trace(store, b).file_path.empty());
  CHECK_THROWS_AS(trace(store, 9), Error);
  CHECK_THROWS_AS(store.insert({1, DocKind::java_method, "dup", {}}), Error);
  CHECK(store.count(DocKind::java_method) == 1);

  const auto dir = fs::temp_directory_path() / "corpusdedup_store_test";
  fs::remove_all(dir);
  store.save(dir);
  const auto loaded = CorpusStore::load(dir);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.documents()[0] == store.documents()[0]);
  CHECK(loaded.documents()[1] == store.documents()[1]);
  CHECK(loaded.next_id() == store.next_id());
  fs::remove_all(dir);

  CHECK(parse_record(format_record(store.documents()[1])) == store.documents()[1]);
  CHECK_THROWS_AS(parse_record("1\tjava_method\t!!!\tp\tf\t1\t1"), Error);
}

TEST_CASE("trace: ingestion of a project tree matches the ingestion log") {
  const auto root = fs::temp_directory_path() / "corpusdedup_trace_test";
  fs::remove_all(root);
  fs::create_directories(root / "p" / "src");
  {
    std::ofstream f(root / "p" / "src" / "A.java");
    f << "class A {\n\n  int f() {\n    return 1;\n  }\n}\n";
  }
  CorpusStore store;
  const auto stats = ingest_java_tree(root, store);
  CHECK(stats.files == 1);
  REQUIRE(store.size() == 1);
  CHECK(trace(store, 0) == Provenance{"p", "src/A.java", 3, 5});
  fs::remove_all(root);

  // Whole fixture corpus: every stored document traces back to the record the
  // extractor produced for its file, in file order.
  CorpusStore first, second;
  ingest_java_tree(kFixtures / "java", first);
  ingest_java_tree(kFixtures / "java", second);
  REQUIRE(first.size() == second.size());
  std::vector<Document> log;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(kFixtures / "java")) {
    if (e.path().extension() == ".java") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const auto rel = fs::relative(f, kFixtures / "java");
    const auto project = rel.begin()->string();
    const auto path = fs::relative(f, kFixtures / "java" / project).generic_string();
    try {
      for (auto& r : filter_methods(extract_java_methods(read_file(f), project, path))) {
        log.push_back(std::move(r.document));
      }
    } catch (const Error&) {
    }
  }
  REQUIRE(log.size() == first.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& d = first.documents()[i];
    CHECK(d.id == i);
    CHECK(trace(first, d.id) == log[i].provenance);
    CHECK(d.text == log[i].text);
    CHECK(second.documents()[i] == d);
  }
}

TEST_CASE("ingest: doc comment flag prepends the comment") {
  const auto root = fs::temp_directory_path() / "corpusdedup_doc_test";
  fs::remove_all(root);
  fs::create_directories(root / "p");
  {
    std::ofstream f(root / "p" / "A.java");
    f << "class A {\n  /** Adds. */\n  int f() {\n    return 1;\n  }\n}\n";
  }
  CorpusStore plain, with_doc;
  ingest_java_tree(root, plain);
  JavaIngestOptions opt;
  opt.include_doc_comment = true;
  ingest_java_tree(root, with_doc, opt);
  REQUIRE(plain.size() == 1);
  REQUIRE(with_doc.size() == 1);
  CHECK(plain.documents()[0].text.starts_with("int f()"));
  CHECK(with_doc.documents()[0].text.starts_with("/** Adds. */"));
  CHECK(with_doc.documents()[0].provenance.start_line == 2);
  fs::remove_all(root);
}

TEST_CASE("extract_holdout: examples and set algebra") {
  CorpusStore store;
  for (int i = 1; i <= 3; ++i) store.insert({static_cast<DocId>(i), DocKind::java_method, "t", {"p", "f", 1, 1}});
  auto s = extract_holdout(store, {2});
  REQUIRE(s.holdout.size() == 1);
  CHECK(s.holdout[0].id == 2);
  CHECK(s.remainder_ids == std::set<DocId>{1, 3});
  CHECK(extract_holdout(store, {}).remainder_ids.size() == 3);
  CHECK_THROWS_AS(extract_holdout(store, {4}), Error);

  CorpusStore big;
  for (int i = 0; i < 10000; ++i) big.append({0, DocKind::java_method, "x", {"p", "f", 1, 1}});
  std::vector<DocId> ids(10000);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(8192);
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::set<DocId> hold(ids.begin(), ids.begin() + 8192);
  const auto split = extract_holdout(big, hold);
  CHECK(split.holdout.size() == 8192);
  CHECK(split.remainder_ids.size() == 10000 - 8192);
  CHECK(std::is_sorted(split.holdout.begin(), split.holdout.end(),
                       [](const Document& a, const Document& b) { return a.id < b.id; }));
  for (const auto& d : split.holdout) CHECK_FALSE(split.remainder_ids.contains(d.id));
}

TEST_CASE("read_id_list skips blanks and comments") {
  std::istringstream in("# holdout\n3\n\n1\n2\n");
  CHECK(read_id_list(in) == std::set<DocId>{1, 2, 3});
  std::istringstream bad("12x\n");
  CHECK_THROWS_AS(read_id_list(bad), Error);
}
