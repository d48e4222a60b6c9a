//
// Copyright 2026 The bioner-gen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "bioner/formats.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "bioner/text.h"

namespace bioner {

using json = nlohmann::ordered_json;

CorpusFormat CorpusFormatFromString(std::string_view s) {
  if (s == "pubtator") return CorpusFormat::kPubtator;
  if (s == "conll") return CorpusFormat::kConll;
  if (s == "json" || s == "jsonl") return CorpusFormat::kJsonl;
  throw Error("unknown corpus format '" + std::string(s) + "'");
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && IsAsciiSpace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool ParseSize(std::string_view s, std::size_t& value) {
  s = Trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

struct PendingMention {
  std::size_t line = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string type;
  std::vector<std::string> cuis;
};

struct PendingDocument {
  std::string id;
  std::size_t first_line = 0;
  std::optional<std::string> title;
  std::optional<std::string> abstract;
  std::vector<PendingMention> mentions;

  bool empty() const { return id.empty(); }
};

void FlushPubtator(PendingDocument& pending, char joiner, Corpus& corpus) {
  if (pending.empty()) return;
  if (!pending.title || !pending.abstract) {
    throw ParseError("document " + pending.id + " starting at line " +
                     std::to_string(pending.first_line) + " is truncated (" +
                     (pending.title ? "no abstract" : "no title") + " line)");
  }
  Document doc;
  doc.id = pending.id;
  doc.title_length = pending.title->size();
  doc.text = *pending.title + joiner + *pending.abstract;
  const std::vector<std::size_t> cp = CodepointOffsets(doc.text);
  const std::size_t n_cp = cp.size() - 1;
  for (PendingMention& pm : pending.mentions) {
    if (pm.start >= pm.end || pm.end > n_cp) {
      corpus.issues.push_back(
          {doc.id, pm.line, "span_out_of_range",
           "offsets [" + std::to_string(pm.start) + "," +
               std::to_string(pm.end) + ") outside text of length " +
               std::to_string(n_cp)});
      continue;
    }
    Mention m;
    m.start = cp[pm.start];
    m.end = cp[pm.end];
    m.surface = doc.text.substr(m.start, m.end - m.start);
    if (m.surface != pm.surface) {
      corpus.issues.push_back({doc.id, pm.line, "span_mismatch",
                               "surface '" + pm.surface + "' but text at [" +
                                   std::to_string(pm.start) + "," +
                                   std::to_string(pm.end) + ") is '" +
                                   m.surface + "'"});
      continue;
    }
    m.type = std::move(pm.type);
    m.cuis = std::move(pm.cuis);
    doc.mentions.push_back(std::move(m));
  }
  corpus.documents.push_back(std::move(doc));
  pending = PendingDocument{};
}

}  // namespace

std::vector<std::string> SplitCuis(std::string_view field) {
  std::vector<std::string> out;
  std::string current;
  auto push = [&] {
    std::string_view t = Trim(current);
    if (!t.empty()) out.emplace_back(t);
    current.clear();
  };
  for (char c : field) {
    if (c == '|' || c == '+') {
      push();
    } else {
      current.push_back(c);
    }
  }
  push();
  return out;
}

Corpus ParsePubtator(std::istream& in, const LoadOptions& options,
                     const PubtatorOptions& pubtator) {
  Corpus corpus;
  corpus.role = options.role;
  corpus.tokenizer = options.tokenizer;
  PendingDocument pending;
  std::string line;
  std::size_t line_no = 0;

  auto begin_document = [&](std::string_view id) {
    if (!pending.empty() && pending.id != id) {
      FlushPubtator(pending, pubtator.joiner, corpus);
    }
    if (pending.empty()) {
      pending.id = std::string(id);
      pending.first_line = line_no;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (Trim(line).empty()) {
      FlushPubtator(pending, pubtator.joiner, corpus);
      continue;
    }
    const std::size_t bar = line.find('|');
    const std::size_t tab = line.find('\t');
    if (bar != std::string::npos && (tab == std::string::npos || bar < tab) &&
        line.size() >= bar + 3 && line[bar + 2] == '|' &&
        (line[bar + 1] == 't' || line[bar + 1] == 'a')) {
      const std::string_view id = std::string_view(line).substr(0, bar);
      begin_document(id);
      std::string body = line.substr(bar + 3);
      auto& slot = line[bar + 1] == 't' ? pending.title : pending.abstract;
      if (slot) {
        corpus.issues.push_back({pending.id, line_no, "duplicate_section",
                                 "repeated title/abstract line"});
        continue;
      }
      slot = std::move(body);
      continue;
    }
    if (tab == std::string::npos) {
      corpus.issues.push_back({pending.id, line_no, "malformed_line",
                               "unrecognized line: " + line});
      continue;
    }
    const std::vector<std::string_view> fields = SplitOn(line, '\t');
    if (fields.size() >= 2 && fields[1] == "CID") continue;  // relation
    if (pending.empty() || fields[0] != pending.id) {
      if (pending.empty() || !pending.title) {
        throw ParseError("annotation at line " + std::to_string(line_no) +
                         " precedes the text of document " +
                         std::string(fields[0]));
      }
      corpus.issues.push_back({std::string(fields[0]), line_no,
                               "doc_id_mismatch",
                               "annotation for a document other than " +
                                   pending.id});
      continue;
    }
    PendingMention pm;
    pm.line = line_no;
    if (fields.size() < 5 || !ParseSize(fields[1], pm.start) ||
        !ParseSize(fields[2], pm.end)) {
      corpus.issues.push_back({pending.id, line_no, "malformed_line",
                               "bad annotation line: " + line});
      continue;
    }
    pm.surface = std::string(fields[3]);
    pm.type = std::string(Trim(fields[4]));
    if (fields.size() >= 6) pm.cuis = SplitCuis(fields[5]);
    if (pm.cuis.empty()) {
      corpus.warnings.push_back({pending.id, line_no, "missing_cui",
                                 "annotation without CUI; using -1"});
      pm.cuis = {std::string(kUnknownCui)};
    }
    pending.mentions.push_back(std::move(pm));
  }
  FlushPubtator(pending, pubtator.joiner, corpus);
  ApplyTypeOptions(corpus, options);
  return corpus;
}

void WritePubtator(std::ostream& out, const Corpus& corpus,
                   const PubtatorOptions& pubtator) {
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const Document& doc = corpus.documents[d];
    std::string title = doc.text;
    std::string abstract;
    if (doc.title_length && *doc.title_length < doc.text.size() &&
        doc.text[*doc.title_length] == pubtator.joiner) {
      title = doc.text.substr(0, *doc.title_length);
      abstract = doc.text.substr(*doc.title_length + 1);
    }
    out << doc.id << "|t|" << title << '\n';
    out << doc.id << "|a|" << abstract << '\n';
    const std::vector<std::size_t> cp = CodepointOffsets(doc.text);
    auto to_cp = [&](std::size_t byte) {
      return static_cast<std::size_t>(
          std::lower_bound(cp.begin(), cp.end(), byte) - cp.begin());
    };
    for (const Mention& m : doc.mentions) {
      out << doc.id << '\t' << to_cp(m.start) << '\t' << to_cp(m.end) << '\t'
          << m.surface << '\t' << m.type << '\t';
      for (std::size_t i = 0; i < m.cuis.size(); ++i) {
        out << (i ? "|" : "") << m.cuis[i];
      }
      out << '\n';
    }
    out << '\n';
  }
}

Corpus ParseConll(std::istream& in, const LoadOptions& options,
                  BioRepair repair) {
  Corpus corpus;
  corpus.role = options.role;
  corpus.tokenizer = options.tokenizer;

  struct Row {
    std::string token;
    std::string tag;
    std::string cui;
  };
  std::vector<std::vector<std::vector<Row>>> docs;  // doc -> sentence -> row
  std::vector<Row> sentence;
  std::vector<std::size_t> sentence_line;  // first line of each sentence
  bool has_docstart = false;
  std::size_t line_no = 0;
  std::size_t sentence_first_line = 0;

  auto flush_sentence = [&] {
    if (sentence.empty()) return;
    if (docs.empty() || !has_docstart) docs.emplace_back();
    docs.back().push_back(std::move(sentence));
    sentence_line.push_back(sentence_first_line);
    sentence.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    std::istringstream fields(line);
    Row row;
    if (!(fields >> row.token)) {
      flush_sentence();
      continue;
    }
    if (row.token == "-DOCSTART-") {
      flush_sentence();
      has_docstart = true;
      docs.emplace_back();
      continue;
    }
    if (!(fields >> row.tag)) {
      corpus.issues.push_back({"", line_no, "malformed_line",
                               "token without tag: " + line});
      continue;
    }
    fields >> row.cui;
    if (sentence.empty()) sentence_first_line = line_no;
    sentence.push_back(std::move(row));
  }
  flush_sentence();

  std::size_t sentence_index = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (docs[d].empty()) continue;
    Document doc;
    doc.id = has_docstart ? "doc" + std::to_string(d + 1)
                          : "s" + std::to_string(d + 1);
    for (const auto& rows : docs[d]) {
      if (!doc.text.empty()) doc.text += '\n';
      std::vector<Token> tokens;
      TagSequence tags;
      for (const Row& r : rows) {
        if (!tokens.empty()) doc.text += ' ';
        tokens.push_back({r.token, doc.text.size(),
                          doc.text.size() + r.token.size()});
        doc.text += r.token;
        tags.push_back(r.tag);
      }
      std::vector<Mention> decoded;
      try {
        decoded = FromBio(doc.text, tokens, tags, repair);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(sentence_line[sentence_index]) +
                         ": " + e.what());
      }
      for (Mention& m : decoded) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
          if (tokens[i].start == m.start && !rows[i].cui.empty()) {
            m.cuis = SplitCuis(rows[i].cui);
            if (m.cuis.empty()) m.cuis = {std::string(kUnknownCui)};
          }
        }
        doc.mentions.push_back(std::move(m));
      }
      ++sentence_index;
    }
    corpus.documents.push_back(std::move(doc));
  }
  ApplyTypeOptions(corpus, options);
  return corpus;
}

Corpus ReadJsonl(std::istream& in, const LoadOptions& options) {
  Corpus corpus;
  corpus.role = options.role;
  corpus.tokenizer = options.tokenizer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      corpus.issues.push_back(
          {"", line_no, "malformed_json", std::string(e.what())});
      continue;
    }
    try {
      Document doc;
      doc.id = j.at("doc_id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      if (j.contains("title_length")) {
        doc.title_length = j["title_length"].get<std::size_t>();
      }
      for (const json& jm : j.value("mentions", json::array())) {
        Mention m;
        m.start = jm.at("start").get<std::size_t>();
        m.end = jm.at("end").get<std::size_t>();
        m.surface = jm.at("surface").get<std::string>();
        m.type = jm.at("type").get<std::string>();
        m.cuis = jm.at("cuis").get<std::vector<std::string>>();
        if (m.cuis.empty()) m.cuis = {std::string(kUnknownCui)};
        if (m.start >= m.end || m.end > doc.text.size() ||
            doc.text.compare(m.start, m.end - m.start, m.surface) != 0) {
          corpus.issues.push_back({doc.id, line_no, "span_mismatch",
                                   "mention '" + m.surface +
                                       "' does not match the text"});
          continue;
        }
        doc.mentions.push_back(std::move(m));
      }
      corpus.documents.push_back(std::move(doc));
    } catch (const json::exception& e) {
      corpus.issues.push_back(
          {"", line_no, "schema_violation", std::string(e.what())});
    }
  }
  ApplyTypeOptions(corpus, options);
  return corpus;
}

void WriteJsonl(std::ostream& out, const Corpus& corpus) {
  for (const Document& doc : corpus.documents) {
    json j;
    j["doc_id"] = doc.id;
    j["text"] = doc.text;
    if (doc.title_length) j["title_length"] = *doc.title_length;
    json mentions = json::array();
    for (const Mention& m : doc.mentions) {
      mentions.push_back({{"start", m.start},
                          {"end", m.end},
                          {"surface", m.surface},
                          {"type", m.type},
                          {"cuis", m.cuis},
                          {"misaligned", m.misaligned}});
    }
    j["mentions"] = std::move(mentions);
    json sentences = json::array();
    for (const Sentence& s : doc.sentences) {
      json tokens = json::array();
      for (const Token& t : s.tokens) tokens.push_back({t.start, t.end});
      sentences.push_back(
          {{"start", s.start}, {"end", s.end}, {"tokens", std::move(tokens)}});
    }
    j["sentences"] = std::move(sentences);
    out << j.dump() << '\n';
  }
}

Corpus LoadCorpus(const std::string& path, CorpusFormat format,
                  const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  switch (format) {
    case CorpusFormat::kPubtator:
      return ParsePubtator(in, options);
    case CorpusFormat::kConll:
      return ParseConll(in, options);
    case CorpusFormat::kJsonl:
      return ReadJsonl(in, options);
  }
  throw Error("unsupported corpus format");
}

void SaveJsonl(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  WriteJsonl(out, corpus);
}

}  // namespace bioner
