#include "relcurr/questionnaire.hpp"

#include <algorithm>
#include <set>

#include "relcurr/errors.hpp"
#include "relcurr/rng.hpp"

namespace relcurr {

const char* to_string(Category c) {
  switch (c) {
    case Category::EyeGaze: return "eye_gaze";
    case Category::FacialExpr: return "facial_expression";
    case Category::BodyPosture: return "body_posture";
    case Category::Distraction: return "distraction";
  }
  return "unknown";
}

const char* to_string(Polarity p) {
  return p == Polarity::EngagementPositive ? "engagement_positive" : "engagement_negative";
}

Category category_from_string(const std::string& s) {
  for (auto c : {Category::EyeGaze, Category::FacialExpr, Category::BodyPosture, Category::Distraction})
    if (s == to_string(c)) return c;
  throw Error(ErrorKind::InvalidConfig, "unknown question category '" + s + "'");
}

Polarity polarity_from_string(const std::string& s) {
  for (auto p : {Polarity::EngagementPositive, Polarity::EngagementNegative})
    if (s == to_string(p)) return p;
  throw Error(ErrorKind::InvalidConfig, "unknown question polarity '" + s + "'");
}

std::vector<std::string> Questionnaire::ids() const {
  std::vector<std::string> out;
  for (const auto& q : questions) out.push_back(q.id);
  return out;
}

const Question* Questionnaire::find(const std::string& id) const {
  for (const auto& q : questions)
    if (q.id == id) return &q;
  return nullptr;
}

void Questionnaire::validate() const {
  std::set<std::string> seen;
  for (const auto& q : questions) {
    if (q.id.empty()) throw Error(ErrorKind::InvalidConfig, "question with empty id");
    if (!seen.insert(q.id).second) throw Error(ErrorKind::InvalidConfig, "duplicate question id '" + q.id + "'");
  }
}

Questionnaire default_questionnaire() {
  using C = Category;
  constexpr auto pos = Polarity::EngagementPositive;
  constexpr auto neg = Polarity::EngagementNegative;
  Questionnaire q;
  q.version = 1;
  q.questions = {
      {"Q1", C::EyeGaze,
       "Does the student frequently shift their gaze significantly away from the screen or primary point of focus?", neg},
      {"Q2", C::EyeGaze,
       "Does the student’s eye gaze remain concentrated in one consistent direction while watching the video?", pos},
      {"Q3", C::EyeGaze, "Does the student keep their attention directed at a single point during most of the video?",
       pos},
      {"Q4", C::EyeGaze,
       "Does the student’s eye movement stay within a limited area, suggesting focused attention on the content?",
       pos},
      {"Q5", C::EyeGaze, "Does the student frequently glance away from the screen?", neg},
      {"Q6", C::FacialExpr, "Does the student appear uninterested or bored based on their facial expressions?", neg},
      {"Q7", C::FacialExpr, "Does the student show signs of fatigue or sleepiness, such as yawning or nodding off?",
       neg},
      {"Q8", C::FacialExpr, "Does the student barely open their eyes, appearing tired?", neg},
      {"Q9", C::FacialExpr, "Does the student appear to like or enjoy the content being presented?", pos},
      {"Q10", C::BodyPosture, "Is the student fidgeting restlessly in their chair?", neg},
      {"Q11", C::BodyPosture, "Does the student exhibit a passive posture with minimal movement?", neg},
      {"Q12", C::BodyPosture, "Does the student lean forward, appearing highly engaged with the content?", pos},
      {"Q13", C::Distraction, "Is the student using a phone or other device during the lecture?", neg},
      {"Q14", C::Distraction, "Does the student talk to others or engage in activities unrelated to the lecture?", neg},
      {"Q15", C::Distraction, "Are there any signs of the student being distracted from the lecture?", neg},
  };
  return q;
}

Questionnaire question_subset(const Questionnaire& q, int count) {
  std::vector<int> numbers;
  switch (count) {
    case 3: numbers = {1, 12, 13}; break;
    case 6: numbers = {1, 2, 9, 10, 12, 13}; break;
    case 9: numbers = {1, 2, 6, 7, 9, 10, 12, 13, 14}; break;
    case 12: numbers = {1, 2, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}; break;
    case 15: numbers = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}; break;
    default:
      throw Error(ErrorKind::InvalidConfig,
                  "unsupported question count " + std::to_string(count) + " (expected 3, 6, 9, 12 or 15)");
  }
  Questionnaire out;
  out.version = q.version;
  for (int n : numbers) {
    const auto id = "Q" + std::to_string(n);
    const auto* found = q.find(id);
    if (!found) throw Error(ErrorKind::InvalidConfig, "questionnaire lacks " + id);
    out.questions.push_back(*found);
  }
  return out;
}

std::string question_set_hash(const std::vector<std::string>& ids) {
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  std::string joined;
  for (const auto& id : sorted) joined += id + ",";
  return hash_hex(joined);
}

std::vector<int> sample_frames(int length, int count) {
  if (count < 1 || length < 1 || count > length)
    throw Error(ErrorKind::InvalidConfig, "cannot sample " + std::to_string(count) + " frames from " +
                                              std::to_string(length));
  if (count == 1) return {(length - 1) / 2};
  std::vector<int> out(count);
  const long long span = length - 1;
  const long long steps = count - 1;
  for (long long i = 0; i < count; ++i) out[i] = static_cast<int>((i * span + steps / 2) / steps);
  return out;
}

}  // namespace relcurr
