#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semshift/dataset.hpp"
#include "semshift/labels.hpp"
#include "semshift/version.hpp"

namespace semshift {

enum class PromptMethod { FewShot, Cot, Rhetoric };

inline constexpr std::array<PromptMethod, 3> kAllMethods = {
    PromptMethod::FewShot, PromptMethod::Cot, PromptMethod::Rhetoric};

inline std::string_view method_name(PromptMethod m) {
  switch (m) {
    case PromptMethod::FewShot: return "fewshot";
    case PromptMethod::Cot: return "cot";
    case PromptMethod::Rhetoric: return "rhetoric";
  }
  return "?";
}

inline std::string_view method_display_name(PromptMethod m) {
  switch (m) {
    case PromptMethod::FewShot: return "Few-Shot";
    case PromptMethod::Cot: return "CoT";
    case PromptMethod::Rhetoric: return "Rhetoric";
  }
  return "?";
}

inline std::optional<PromptMethod> parse_method(std::string_view s) {
  std::string f = casefold(trim(s));
  if (f == "fewshot" || f == "few-shot") return PromptMethod::FewShot;
  if (f == "cot") return PromptMethod::Cot;
  if (f == "rhetoric") return PromptMethod::Rhetoric;
  return std::nullopt;
}

// The orientation template names its contrast device explicitly; both
// wordings are shipped and the manifest picks one.
enum class OrientationDevice { Antithesis, Antanagoge };

inline std::string_view orientation_device_name(OrientationDevice d) {
  return d == OrientationDevice::Antithesis ? "antithesis" : "antanagoge";
}

inline std::optional<OrientationDevice> parse_orientation_device(
    std::string_view s) {
  std::string f = casefold(trim(s));
  if (f == "antithesis") return OrientationDevice::Antithesis;
  if (f == "antanagoge") return OrientationDevice::Antanagoge;
  return std::nullopt;
}

struct TemplateOptions {
  OrientationDevice orientation_device = OrientationDevice::Antithesis;
};

inline constexpr std::string_view kAnswerPrefix = "A: ";

// ---------------------------------------------------------------------------
// Template text. These strings are the task definition; reports are only
// comparable across runs that used byte-identical templates, which is what
// kTemplateVersion pins.

namespace templates {

inline constexpr std::string_view kDimensionIntro =
    "You are presented with two sentences that both contain a specific word. "
    "Your task is to analyze how this word is used in each sentence and "
    "determine if its usage in the second sentence represents the same sense "
    "with respect to its use in the first sentence.";

inline constexpr std::string_view kRelationIntro =
    "You are presented with two sentences that both contain a specific word. "
    "Your task is to analyze how this word is used in each sentence and "
    "determine if its usage in the second sentence represents a metaphor or "
    "a metonymy with respect to its use in the first sentence.";

inline constexpr std::string_view kOrientationIntro =
    "You will be provided with two sentences that share a common word used "
    "with different senses. Your task is to describe if the second sense for "
    "the word is more positive then the first.";

inline constexpr std::string_view kStepCueDefault =
    "Follow these steps to complete the task:";

inline constexpr std::string_view kStepCueOrientation =
    "Follow this instructions to execute the task:";

inline constexpr std::string_view kStepOne =
    "Step 1. Describe the meaning of the word in the first sentence.";

inline constexpr std::string_view kStepTwo =
    "Step 2. Describe the meaning of the word in the second sentence.";

// Pole-specific step 3, rhetoric variant.
inline constexpr std::string_view kDimensionStepThreeRhetoric =
    "Step 3. Write a sentence that joins both using zeugma and the same "
    "shared word while preserving the same sense. If the construction makes "
    "a bad pun, the words have a different sense.";

inline constexpr std::string_view kRelationStepThreeRhetoric =
    "Step 3. Compare the uses, determining if the second is related as a "
    "metaphor (where the word is used in a similar but non-literal sense), "
    "as a metonymy (where the word represents something closely related to "
    "or associated with it), or unrelated, used with a different sense.";

// The device word is spliced in: antithesis or antanagoge.
inline constexpr std::string_view kOrientationStepThreeRhetoricPrefix =
    "Step 3. Leverage the rhetorical strategy of ";

inline constexpr std::string_view kOrientationStepThreeRhetoricSuffix =
    ", contrasting a negative with a positive, to weigh why one meaning "
    "might be more favorable than the other, or if they stand neutral.";

// Pole-specific step 3, plain chain-of-thought variant: same structure, the
// rhetorical instrument replaced by a direct comparison.
inline constexpr std::string_view kDimensionStepThreeCot =
    "Step 3. Compare the two described meanings and decide whether the word "
    "is used with the same sense in both sentences.";

inline constexpr std::string_view kRelationStepThreeCot =
    "Step 3. Compare the uses, determining if the second is related as a "
    "metaphor, as a metonymy, or unrelated, used with a different sense.";

inline constexpr std::string_view kOrientationStepThreeCot =
    "Step 3. Compare the two meanings to weigh why one meaning might be more "
    "favorable than the other, or if they stand neutral.";

inline constexpr std::string_view kDimensionStepFour =
    "Step 4. Based on the previous reasoning give your final answer: "
    "'identical' or 'different.'";

inline constexpr std::string_view kRelationStepFour =
    "Step 4. Based on the third reasoning, write the final answer, "
    "'metaphor', 'metonymy', or 'unrelated.'";

inline constexpr std::string_view kOrientationStepFour =
    "Step 4. Based on the third reasoning, write the final answer "
    "'negative', 'positive', or 'neutral.'";

}  // namespace templates

inline std::string instruction_template(Pole pole, PromptMethod method,
                                        const TemplateOptions& opts = {}) {
  using namespace templates;
  std::string intro;
  std::string cue{kStepCueDefault};
  std::string step3_rhetoric, step3_cot, step4;
  switch (pole) {
    case Pole::Dimension:
      intro = kDimensionIntro;
      step3_rhetoric = kDimensionStepThreeRhetoric;
      step3_cot = kDimensionStepThreeCot;
      step4 = kDimensionStepFour;
      break;
    case Pole::Relation:
      intro = kRelationIntro;
      step3_rhetoric = kRelationStepThreeRhetoric;
      step3_cot = kRelationStepThreeCot;
      step4 = kRelationStepFour;
      break;
    case Pole::Orientation:
      intro = kOrientationIntro;
      cue = kStepCueOrientation;
      step3_rhetoric =
          std::string(kOrientationStepThreeRhetoricPrefix) +
          std::string(orientation_device_name(opts.orientation_device)) +
          std::string(kOrientationStepThreeRhetoricSuffix);
      step3_cot = kOrientationStepThreeCot;
      step4 = kOrientationStepFour;
      break;
  }

  if (method == PromptMethod::FewShot) return intro;

  std::string step3 =
      method == PromptMethod::Rhetoric ? step3_rhetoric : step3_cot;
  std::string out = intro;
  out += "\n";
  out += cue;
  out += "\n";
  out += kStepOne;
  out += "\n";
  out += kStepTwo;
  out += "\n";
  out += step3;
  out += "\n";
  out += step4;
  return out;
}

// ---------------------------------------------------------------------------
// Bundle assembly

// Marks the span with asterisks: "He *lost* his keys."
inline std::string mark_target(std::string_view sentence, std::size_t start,
                               std::size_t end) {
  if (start >= end || end > sentence.size()) {
    throw std::out_of_range("mark_target: span [" + std::to_string(start) +
                            "," + std::to_string(end) +
                            ") out of bounds for sentence of length " +
                            std::to_string(sentence.size()));
  }
  std::string out;
  out.reserve(sentence.size() + 2);
  out.append(sentence.substr(0, start));
  out.push_back('*');
  out.append(sentence.substr(start, end - start));
  out.push_back('*');
  out.append(sentence.substr(end));
  return out;
}

// The question line depends only on the pole, never on the method; that is
// what keeps method comparisons honest.
inline std::string question_line(Pole pole) {
  switch (pole) {
    case Pole::Dimension:
      return "Q: Is the word used with an identical or different sense in "
             "the two sentences?";
    case Pole::Relation:
      return "Q: Is the usage in the second sentence related to the first "
             "as a metaphor, a metonymy, or unrelated?";
    case Pole::Orientation:
      return "Q: Is the second sense more positive, more negative, or "
             "neutral with respect to the first?";
  }
  return "";
}

// One worked example block. The rationale line appears for the reasoning
// methods only; fewshot blocks jump straight from glosses to the answer.
inline std::string format_fewshot(const FewShotExample& ex,
                                  PromptMethod method) {
  const auto& it = ex.item;
  std::string out;
  out += "Sentence 1: " + mark_target(it.sentence1, it.span1_start,
                                      it.span1_end) + "\n";
  out += "Sentence 2: " + mark_target(it.sentence2, it.span2_start,
                                      it.span2_end) + "\n";
  out += "Sense 1: " + ex.gloss1 + "\n";
  out += "Sense 2: " + ex.gloss2 + "\n";
  if (method != PromptMethod::FewShot) out += ex.rationale + "\n";
  out += std::string(kAnswerPrefix) + it.gold;
  return out;
}

struct PromptBundle {
  std::string item_id;
  Pole pole = Pole::Dimension;
  PromptMethod method = PromptMethod::FewShot;
  std::string instruction_text;
  std::string shots_text;
  std::string query_text;
  std::string answer_prefix;
  std::vector<std::string> answer_alphabet;
};

inline PromptBundle render_prompt(const SentencePairItem& item,
                                  PromptMethod method,
                                  const std::vector<FewShotExample>& shots,
                                  const TemplateOptions& opts = {}) {
  if (shots.size() != 3) {
    throw DataError(DataError::Kind::BadArgument,
                    "render_prompt requires exactly 3 fewshot examples, got " +
                        std::to_string(shots.size()));
  }
  for (const auto& s : shots) {
    if (s.item.pole != item.pole) {
      throw DataError(DataError::Kind::PoleMismatch,
                      "fewshot example '" + s.item.id + "' has pole '" +
                          std::string(pole_name(s.item.pole)) +
                          "' but item '" + item.id + "' has pole '" +
                          std::string(pole_name(item.pole)) + "'");
    }
  }

  PromptBundle b;
  b.item_id = item.id;
  b.pole = item.pole;
  b.method = method;
  b.instruction_text = instruction_template(item.pole, method, opts);
  for (std::size_t i = 0; i < shots.size(); ++i) {
    if (i > 0) b.shots_text += "\n\n";
    b.shots_text += format_fewshot(shots[i], method);
  }
  b.query_text =
      "Sentence 1: " +
      mark_target(item.sentence1, item.span1_start, item.span1_end) + "\n" +
      "Sentence 2: " +
      mark_target(item.sentence2, item.span2_start, item.span2_end) + "\n" +
      question_line(item.pole);
  b.answer_prefix = kAnswerPrefix;
  b.answer_alphabet = label_alphabet(item.pole);
  return b;
}

inline std::string full_prompt_text(const PromptBundle& b) {
  return b.instruction_text + "\n\n" + b.shots_text + "\n\n" + b.query_text +
         "\n";
}

}  // namespace semshift
