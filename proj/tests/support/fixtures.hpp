#pragma once

// Shared fixture corpora and helpers for the unit and acceptance suites.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "semshift/backend.hpp"
#include "semshift/dataset.hpp"
#include "semshift/labels.hpp"

namespace fixtures {

using namespace semshift;

// ---------------------------------------------------------------------------
// Generic helpers

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("semshift-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Builds an item by locating the given word form in each sentence.
inline SentencePairItem make_item(const std::string& id,
                                  const std::string& lemma,
                                  const std::string& s1,
                                  const std::string& w1,
                                  const std::string& s2,
                                  const std::string& w2, Pole pole,
                                  const std::string& gold) {
  auto find_span = [](const std::string& sentence, const std::string& word,
                      std::size_t& b, std::size_t& e) {
    auto pos = sentence.find(word);
    if (pos == std::string::npos) {
      throw std::logic_error("fixture bug: '" + word + "' not in '" +
                             sentence + "'");
    }
    b = pos;
    e = pos + word.size();
  };
  SentencePairItem item;
  item.id = id;
  item.lemma = lemma;
  item.sentence1 = s1;
  item.sentence2 = s2;
  find_span(s1, w1, item.span1_start, item.span1_end);
  find_span(s2, w2, item.span2_start, item.span2_end);
  item.pole = pole;
  item.gold = gold;
  return item;
}

// ---------------------------------------------------------------------------
// Fixture corpora: 3 fewshot records + eval records per pole.

struct PoleFixture {
  Dataset dataset;  // all records, glosses attached, nothing selected yet
  std::vector<std::string> fewshot_ids;
};

inline PoleFixture dimension_fixture() {
  PoleFixture f;
  f.dataset.pole = Pole::Dimension;
  auto& items = f.dataset.items;
  const Pole P = Pole::Dimension;

  items.push_back(make_item("dim-fs1", "lost", "He lost his keys.", "lost",
                            "He lost his temper.", "lost", P, "different"));
  items.push_back(make_item("dim-fs2", "bright", "The bright lamp lit the room.",
                            "bright", "A bright flame rose from the candle.",
                            "bright", P, "identical"));
  items.push_back(make_item("dim-fs3", "cold", "The cold water numbed his hands.",
                            "cold", "She gave him a cold reply.", "cold", P,
                            "different"));
  f.fewshot_ids = {"dim-fs1", "dim-fs2", "dim-fs3"};

  f.dataset.glosses["dim-fs1"] = GlossRecord{
      "to misplace a physical object",
      "to fail to keep control of an emotion",
      "In the first sentence, 'lost' means misplacing a physical object.\n"
      "In the second sentence, 'lost' means failing to keep emotional "
      "control.\n"
      "\"He lost his keys and his temper.\" The construction makes a bad "
      "pun, so the senses are different."};
  f.dataset.glosses["dim-fs2"] = GlossRecord{
      "giving out much light", "giving out much light",
      "In the first sentence, 'bright' describes something giving out much "
      "light.\n"
      "In the second sentence, 'bright' also describes something giving out "
      "much light.\n"
      "\"The bright lamp and the bright flame lit the room.\" The "
      "construction reads naturally with one sense, so the senses are "
      "identical."};
  f.dataset.glosses["dim-fs3"] = GlossRecord{
      "of low temperature", "unfriendly or distant in manner",
      "In the first sentence, 'cold' means of low temperature.\n"
      "In the second sentence, 'cold' means unfriendly in manner.\n"
      "\"The cold water and the cold reply numbed him.\" The construction "
      "makes a bad pun, so the senses are different."};

  items.push_back(make_item("dim-01", "cup", "He drank a cup of coffee.",
                            "cup", "He borrowed a cup of sugar.", "cup", P,
                            "different"));
  items.push_back(make_item("dim-02", "come", "Come out of the closet!",
                            "Come", "He comes singing down the road.",
                            "comes", P, "different"));
  items.push_back(make_item("dim-03", "bank",
                            "She sat on the bank of the river.", "bank",
                            "He deposited cash at the bank.", "bank", P,
                            "different"));
  items.push_back(make_item("dim-04", "run", "They run a small bakery.",
                            "run", "She went for a run before breakfast.",
                            "run", P, "different"));
  items.push_back(make_item("dim-05", "light",
                            "She turned on the light in the hall.", "light",
                            "The light over the desk flickered.", "light", P,
                            "identical"));
  items.push_back(make_item("dim-06", "key", "He turned the key in the lock.",
                            "key", "The key to the cellar hung by the door.",
                            "key", P, "identical"));
  items.push_back(make_item("dim-07", "mouse",
                            "The mouse hid under the floorboards.", "mouse",
                            "She clicked the mouse twice.", "mouse", P,
                            "different"));
  items.push_back(make_item("dim-08", "spring",
                            "The spring in the mattress squeaked.", "spring",
                            "They hiked to a mountain spring.", "spring", P,
                            "different"));
  items.push_back(make_item("dim-09", "star", "The star shone above the horizon.",
                            "star", "A bright star appeared in the night sky.",
                            "star", P, "identical"));
  items.push_back(make_item("dim-10", "sharp", "The sharp knife cut cleanly.",
                            "sharp", "He has a sharp mind.", "sharp", P,
                            "different"));
  items.push_back(make_item("dim-11", "deep", "The deep lake hid the wreck.",
                            "deep", "The well was deep and cold.", "deep", P,
                            "identical"));
  items.push_back(make_item("dim-12", "bar", "He ordered a drink at the bar.",
                            "bar", "She bought a bar of chocolate.", "bar", P,
                            "different"));
  items.push_back(make_item("dim-13", "file", "She put the letter in the file.",
                            "file", "He sharpened the blade with a file.",
                            "file", P, "different"));
  items.push_back(make_item("dim-14", "note", "She left a note on the table.",
                            "note", "He sang the final note perfectly.",
                            "note", P, "different"));
  items.push_back(make_item("dim-15", "branch",
                            "The branch snapped in the storm.", "branch",
                            "The bank opened a new branch downtown.",
                            "branch", P, "different"));
  items.push_back(make_item("dim-16", "cloud", "A cloud drifted across the sky.",
                            "cloud", "The cloud stores our backups.", "cloud",
                            P, "different"));
  items.push_back(make_item("dim-17", "wave", "A wave crashed on the rocks.",
                            "wave", "She gave a friendly wave.", "wave", P,
                            "different"));
  items.push_back(make_item("dim-18", "seal", "The seal basked on the rocks.",
                            "seal", "He broke the seal on the envelope.",
                            "seal", P, "different"));
  items.push_back(make_item("dim-19", "paper", "The paper tore at the corner.",
                            "paper", "A sheet of paper lay on the desk.",
                            "paper", P, "identical"));
  items.push_back(make_item("dim-20", "walk", "They walk to school together.",
                            "walk", "We walk the same route every day.",
                            "walk", P, "identical"));
  return f;
}

inline PoleFixture relation_fixture() {
  PoleFixture f;
  f.dataset.pole = Pole::Relation;
  auto& items = f.dataset.items;
  const Pole P = Pole::Relation;

  items.push_back(make_item(
      "rel-fs1", "hat", "No other style of hat was acceptable for the ceremony.",
      "hat", "He took off his union hat and spoke for himself.", "hat", P,
      "metaphor"));
  items.push_back(make_item(
      "rel-fs2", "crown", "The jeweler polished the crown before the coronation.",
      "crown", "The colonies revolted against the crown.", "crown", P,
      "metonymy"));
  items.push_back(make_item(
      "rel-fs3", "head", "The head of the company approved the merger.",
      "head", "Keep that idea in your head for now.", "head", P, "unrelated"));
  f.fewshot_ids = {"rel-fs1", "rel-fs2", "rel-fs3"};

  f.dataset.glosses["rel-fs1"] = GlossRecord{
      "a shaped covering for the head",
      "a role or capacity a person acts in",
      "In the first sentence, 'hat' is a physical head covering.\n"
      "In the second sentence, 'hat' is a role the speaker acts in.\n"
      "The second use carries the clothing domain onto duties, a similar but "
      "non-literal sense, so it is related as a metaphor."};
  f.dataset.glosses["rel-fs2"] = GlossRecord{
      "a monarch's ceremonial headpiece", "the monarchy as an institution",
      "In the first sentence, 'crown' is the physical headpiece.\n"
      "In the second sentence, 'crown' stands for the institution whose "
      "emblem it is, something closely associated with it, so it is related "
      "as a metonymy."};
  f.dataset.glosses["rel-fs3"] = GlossRecord{
      "the leader of an organization", "the mind",
      "In the first sentence, 'head' is the leader of an organization.\n"
      "In the second sentence, 'head' is the mind.\n"
      "Each sense extends the body part in its own way, but neither derives "
      "from the other, so they are unrelated."};

  items.push_back(make_item(
      "rel-01", "battle",
      "During the course of this battle, four Canadian soldiers were "
      "wounded.",
      "battle",
      "I call on him not to let the battle of hierarchies within the "
      "directorates-general prevent this from being implemented.",
      "battle", P, "metaphor"));
  items.push_back(make_item(
      "rel-02", "winter",
      "The main objective of this forthcoming decision will be preparation "
      "for the winter.",
      "winter", "Winter can cause many disruptions for public transport.",
      "Winter", P, "metonymy"));
  items.push_back(make_item("rel-03", "board",
                            "The carpenter sanded the board smooth.", "board",
                            "The board approved the budget.", "board", P,
                            "metonymy"));
  items.push_back(make_item("rel-04", "heart",
                            "The surgeon examined the patient's heart.",
                            "heart", "She is the heart of the team.", "heart",
                            P, "metaphor"));
  items.push_back(make_item("rel-05", "wing", "The bird folded its wing.",
                            "wing", "The east wing of the hospital was closed.",
                            "wing", P, "metaphor"));
  items.push_back(make_item("rel-06", "glass",
                            "The window glass cracked in the frost.", "glass",
                            "He drank a glass before dinner.", "glass", P,
                            "metonymy"));
  items.push_back(make_item("rel-07", "mouth",
                            "She covered her mouth when she laughed.", "mouth",
                            "They camped at the mouth of the river.", "mouth",
                            P, "metaphor"));
  items.push_back(make_item("rel-08", "suit", "He wore a grey suit to the interview.",
                            "suit", "The suits upstairs rejected the plan.",
                            "suits", P, "metonymy"));
  items.push_back(make_item("rel-09", "crane",
                            "The crane lifted the steel beam onto the roof.",
                            "crane", "A paper crane sat on the shelf.",
                            "crane", P, "unrelated"));
  return f;
}

inline PoleFixture orientation_fixture() {
  PoleFixture f;
  f.dataset.pole = Pole::Orientation;
  auto& items = f.dataset.items;
  const Pole P = Pole::Orientation;

  items.push_back(make_item("ori-fs1", "sick",
                            "The smell of the harbor made him feel sick.",
                            "sick", "That new track is sick.", "sick", P,
                            "positive"));
  items.push_back(make_item("ori-fs2", "dirty",
                            "A child in dirty overalls waved from the porch.",
                            "dirty", "He used a dirty trick to win the contest.",
                            "dirty", P, "negative"));
  items.push_back(make_item("ori-fs3", "table", "He set the table for dinner.",
                            "table", "The table in the appendix lists the totals.",
                            "table", P, "neutral"));
  f.fewshot_ids = {"ori-fs1", "ori-fs2", "ori-fs3"};

  f.dataset.glosses["ori-fs1"] = GlossRecord{
      "nauseated or unwell", "impressively good (slang)",
      "In the first sentence, 'sick' describes feeling unwell.\n"
      "In the second sentence, 'sick' praises the track.\n"
      "Feeling unwell drags one down where praise lifts one up; I'd rather "
      "be praised than queasy. The second sense is more positive."};
  f.dataset.glosses["ori-fs2"] = GlossRecord{
      "covered with dirt", "dishonest or unfair",
      "In the first sentence, 'dirty' is literal grime.\n"
      "In the second sentence, 'dirty' means dishonest.\n"
      "Grime washes off where dishonesty stains a person; I'd rather wear "
      "dirty overalls than suffer a dirty trick. The second sense is more "
      "negative."};
  f.dataset.glosses["ori-fs3"] = GlossRecord{
      "a piece of furniture with a flat top", "a grid of figures",
      "In the first sentence, 'table' is furniture.\n"
      "In the second sentence, 'table' is a grid of figures.\n"
      "Neither furniture nor figures carries warmth or scorn; the senses "
      "stand neutral."};

  items.push_back(make_item("ori-01", "salty",
                            "She was salty because of what happened yesterday.",
                            "salty", "She salts her lectures with jokes.",
                            "salts", P, "positive"));
  items.push_back(make_item("ori-02", "sympathy",
                            "He did not resent their sometimes tiring sympathy.",
                            "sympathy",
                            "The letters showed real sympathy for the prisoners.",
                            "sympathy", P, "positive"));
  items.push_back(make_item("ori-03", "nice",
                            "Only a nice simpleton would trust such a story.",
                            "nice", "They had a nice afternoon by the sea.",
                            "nice", P, "positive"));
  items.push_back(make_item("ori-04", "terrific",
                            "She gave a terrific presentation to the board.",
                            "terrific", "A terrific storm tore the roofs away.",
                            "terrific", P, "negative"));
  items.push_back(make_item("ori-05", "grand", "The grand total came to fifty euros.",
                            "grand", "They stayed in a grand hotel by the lake.",
                            "grand", P, "positive"));
  items.push_back(make_item("ori-06", "plain", "The recipe calls for plain flour.",
                            "plain", "She worried the dress made her look plain.",
                            "plain", P, "negative"));
  items.push_back(make_item("ori-07", "cheap", "They found a cheap flight to Rome.",
                            "cheap", "That was a cheap insult.", "cheap", P,
                            "negative"));
  items.push_back(make_item("ori-08", "cool",
                            "The cool evening air drifted through the window.",
                            "cool", "Her new bike is really cool.", "cool", P,
                            "positive"));
  items.push_back(make_item("ori-09", "still", "The lake lay still at dawn.",
                            "still", "He stood still during the anthem.",
                            "still", P, "neutral"));
  return f;
}

inline PoleFixture fixture_for(Pole pole) {
  switch (pole) {
    case Pole::Dimension: return dimension_fixture();
    case Pole::Relation: return relation_fixture();
    case Pole::Orientation: return orientation_fixture();
  }
  return dimension_fixture();
}

// Fixture with the fewshot pool already selected (20/9/9 eval items).
inline Dataset selected_fixture(Pole pole) {
  auto f = fixture_for(pole);
  return select_fewshot(f.dataset, f.fewshot_ids);
}

// ---------------------------------------------------------------------------
// Response transcripts used by the extraction suite. The odd
// spacing and grammar are the point: parsers must survive real output.

inline const std::string kCupTranscript =
    "In sentence 1, it is used with the sense of a container. \n"
    "---\n"
    "In sentence 2, it is used with the sense of an amount. \n"
    "---\n"
    "\"He drank a cup of sugar.\" Both sentences use 'cup' with different "
    "meanings. \n"
    "A: different";

inline const std::string kBattleTranscript =
    "In the first sentence, 'battle' is used literally, referring to a fight "
    "or conflict.\n"
    "---\n"
    "In the second sentence, 'battle' is used metaphorically to represent a "
    "struggle or conflict between different groups or factions.\n"
    "---\n"
    "The word 'battle' is related to the first sentence as a metaphor.\n"
    "A: metaphor";

inline const std::string kSaltTranscript =
    "In sentence 1, 'salty' is used to describe someone who is angry or "
    "upset.\n"
    "---\n"
    "In sentence 2, 'salts' is used to describe the act of adding flavor to "
    "something, in this case, a lecture.\n"
    "---\n"
    "I'd rather have a lecture with jokes than be angry or upset. The second "
    "sense is more positive.\n"
    "A: positive";

inline const std::string kComeTranscript =
    "In sentence 1 it is used with the sense of emerge. \n"
    "---\n"
    "In sentence 2 it is used with the sense of move in a certain "
    "direction.\n"
    "---\n"
    "\"He came out of the closet singing.\" The word 'come' doesn't make a "
    "bad pun, but it has different senses.  It is still different.\n"
    "A: different";

inline const std::string kDoTranscript =
    "In sentence 1 it is used with the sense of an action. \n"
    "---\n"
    "In sentence 2 is used with the sense of to suffice, to be enough. \n"
    "---\n"
    "\"A' B' grade does not suffice for me to do what I want.\" The word "
    "'do' makes a bad pun, so is different. \n"
    "A: different";

inline const std::string kSympathyTranscript =
    "In the first sentence, 'sympathy' is used in a negative context, "
    "indicating annoyance or irritation.\n"
    "---\n"
    "In the second sentence, 'sympathy' is used to express understanding or "
    "concern.\n"
    "---\n"
    "Expressing understanding or concern (second sentence) is more positive "
    "than feeling annoyed or irritated. \n"
    "A: positive";

// ---------------------------------------------------------------------------
// Mock scripting

inline std::string plain_rationale() {
  return "In the first sentence the word carries its first sense.\n"
         "---\n"
         "In the second sentence the word carries its second sense.\n"
         "---\n"
         "Comparing the two settles the question.";
}

inline std::string wrong_label(Pole pole, const std::string& gold) {
  const auto& a = label_alphabet(pole);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == gold) return a[(i + 1) % a.size()];
  }
  return a.front();
}

// Oracle answering every item's gold label, all methods, all samples.
inline std::unique_ptr<MockOracle> gold_oracle(
    const std::vector<const Dataset*>& datasets,
    const std::string& model_id = "mock-gold") {
  auto oracle = std::make_unique<MockOracle>(model_id);
  for (const Dataset* d : datasets) {
    for (const auto& item : d->items) {
      oracle->add(item.id, "*", -1, MockScript{plain_rationale(), item.gold});
    }
  }
  return oracle;
}

// Per-sample correct counts for a 20-item run scripting accuracy
// (.6, .6, .8, .8, .7).
inline const std::vector<int> kVaryCorrectCounts = {12, 12, 16, 16, 14};

// Oracle scripting, for every method, per-sample accuracy equal to
// correct_counts[k] / n_items: the first correct_counts[k] items (in dataset
// order) answer gold at sample k, the rest answer a wrong label.
inline std::unique_ptr<MockOracle> vary_oracle(
    const Dataset& d, const std::vector<int>& correct_counts,
    const std::string& model_id = "mock-vary") {
  auto oracle = std::make_unique<MockOracle>(model_id);
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    const auto& item = d.items[i];
    for (std::size_t k = 0; k < correct_counts.size(); ++k) {
      bool correct = static_cast<int>(i) < correct_counts[k];
      oracle->add(item.id, "*", static_cast<int>(k),
                  MockScript{plain_rationale(),
                             correct ? item.gold
                                     : wrong_label(d.pole, item.gold)});
    }
  }
  return oracle;
}

// Same scripts as fixture files for the CLI path.
inline void write_gold_fixture_file(const std::filesystem::path& path,
                                    const std::vector<const Dataset*>& datasets) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const Dataset* d : datasets) {
    for (const auto& item : d->items) {
      nlohmann::json obj = {{"item_id", item.id},
                            {"method", "*"},
                            {"sample_index", -1},
                            {"rationale", plain_rationale()},
                            {"answer", item.gold}};
      out << obj.dump() << "\n";
    }
  }
}

inline void write_vary_fixture_file(const std::filesystem::path& path,
                                    const Dataset& d,
                                    const std::vector<int>& correct_counts) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    const auto& item = d.items[i];
    for (std::size_t k = 0; k < correct_counts.size(); ++k) {
      bool correct = static_cast<int>(i) < correct_counts[k];
      nlohmann::json obj = {
          {"item_id", item.id},
          {"method", "*"},
          {"sample_index", static_cast<int>(k)},
          {"rationale", plain_rationale()},
          {"answer", correct ? item.gold : wrong_label(d.pole, item.gold)}};
      out << obj.dump() << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Backend wrappers

// Counts calls through to an inner backend.
class CountingBackend : public ChatBackend {
 public:
  explicit CountingBackend(ChatBackend& inner) : inner_(inner) {}
  std::string chat(const ChatRequest& r) override {
    calls_.fetch_add(1);
    return inner_.chat(r);
  }
  const std::string& model_id() const override { return inner_.model_id(); }
  long calls() const { return calls_.load(); }

 private:
  ChatBackend& inner_;
  std::atomic<long> calls_{0};
};

// Lets the first `budget` calls through, then fails every later call with
// EndpointUnreachable, simulating an endpoint that dies mid-run.
class BudgetBackend : public ChatBackend {
 public:
  BudgetBackend(ChatBackend& inner, long budget)
      : inner_(inner), budget_(budget) {}
  std::string chat(const ChatRequest& r) override {
    if (calls_.fetch_add(1) >= budget_) {
      throw EndpointUnreachable("scripted outage");
    }
    return inner_.chat(r);
  }
  const std::string& model_id() const override { return inner_.model_id(); }
  long calls() const { return calls_.load(); }

 private:
  ChatBackend& inner_;
  long budget_;
  std::atomic<long> calls_{0};
};

// ---------------------------------------------------------------------------
// On-disk workspace for CLI-level tests: datasets, sidecars, mock fixtures,
// and a manifest with relative paths.

struct Workspace {
  std::filesystem::path dir;
  std::filesystem::path manifest_path;
};

struct WorkspaceSpec {
  std::vector<Pole> poles = {Pole::Dimension, Pole::Relation,
                             Pole::Orientation};
  std::vector<std::string> methods = {"fewshot", "cot", "rhetoric"};
  int n_samples = 5;
  bool with_vary_model = false;  // adds mock-vary scripted on dimension
  std::string extraction_mode = "strict";
};

inline Workspace make_workspace(const std::string& tag,
                                const WorkspaceSpec& spec = {}) {
  Workspace w;
  w.dir = fresh_temp_dir(tag);
  std::filesystem::create_directories(w.dir / "data");

  nlohmann::json datasets = nlohmann::json::object();
  std::vector<PoleFixture> fixtures_by_pole;
  for (Pole pole : spec.poles) {
    auto f = fixture_for(pole);
    std::string name{pole_name(pole)};
    write_dataset(f.dataset, (w.dir / "data" / (name + ".jsonl")).string());
    write_gloss_sidecar(f.dataset.glosses,
                        (w.dir / "data" / (name + "-glosses.jsonl")).string());
    datasets[name] = {{"path", "data/" + name + ".jsonl"},
                      {"sidecar", "data/" + name + "-glosses.jsonl"},
                      {"fewshot", f.fewshot_ids}};
    fixtures_by_pole.push_back(std::move(f));
  }

  std::vector<const Dataset*> selected;
  std::vector<Dataset> selected_storage;
  for (auto& f : fixtures_by_pole) {
    selected_storage.push_back(select_fewshot(f.dataset, f.fewshot_ids));
  }
  for (const auto& d : selected_storage) selected.push_back(&d);

  write_gold_fixture_file(w.dir / "data" / "gold-fixture.jsonl", selected);
  nlohmann::json endpoints = nlohmann::json::array();
  endpoints.push_back({{"kind", "mock"},
                       {"model_id", "mock-gold"},
                       {"fixture", "data/gold-fixture.jsonl"}});
  if (spec.with_vary_model) {
    const Dataset* dim = nullptr;
    for (std::size_t i = 0; i < spec.poles.size(); ++i) {
      if (spec.poles[i] == Pole::Dimension) dim = selected[i];
    }
    if (!dim) throw std::logic_error("vary model needs the dimension pole");
    write_vary_fixture_file(w.dir / "data" / "vary-fixture.jsonl", *dim,
                            kVaryCorrectCounts);
    endpoints.push_back({{"kind", "mock"},
                         {"model_id", "mock-vary"},
                         {"fixture", "data/vary-fixture.jsonl"}});
  }

  nlohmann::json manifest = {
      {"version", 1},
      {"template_version", std::string(kTemplateVersion)},
      {"output_dir", "out"},
      {"datasets", datasets},
      {"endpoints", endpoints},
      {"methods", spec.methods},
      {"params",
       {{"temperature", 0.7}, {"n_samples", spec.n_samples},
        {"max_rationale_tokens", 256}}},
      {"extraction_mode", spec.extraction_mode},
      {"orientation_device", "antithesis"},
      {"direction", "forward"},
  };
  w.manifest_path = w.dir / "manifest.json";
  std::ofstream out(w.manifest_path, std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << "\n";
  return w;
}

}  // namespace fixtures
