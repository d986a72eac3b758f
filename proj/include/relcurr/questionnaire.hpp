#pragma once

#include <string>
#include <vector>

namespace relcurr {

enum class Category { EyeGaze, FacialExpr, BodyPosture, Distraction };
enum class Polarity { EngagementPositive, EngagementNegative };

const char* to_string(Category c);
const char* to_string(Polarity p);
Category category_from_string(const std::string& s);
Polarity polarity_from_string(const std::string& s);

struct Question {
  std::string id;  // "Q1" .. "Q15"
  Category category = Category::EyeGaze;
  std::string text;
  Polarity polarity = Polarity::EngagementPositive;

  friend bool operator==(const Question&, const Question&) = default;
};

struct Questionnaire {
  int version = 1;
  std::vector<Question> questions;

  std::vector<std::string> ids() const;
  const Question* find(const std::string& id) const;
  /// Throws InvalidConfig on duplicate or empty ids.
  void validate() const;

  friend bool operator==(const Questionnaire&, const Questionnaire&) = default;
};

/// The 15 yes/no behavioural questions in four categories (5/4/3/3).
Questionnaire default_questionnaire();

/// Reduced question sets used for prompt-size ablations. Supported counts
/// are 3, 6, 9, 12 and 15; each smaller set is contained in the next.
Questionnaire question_subset(const Questionnaire& q, int count);

/// Stable key for a set of question ids (order-insensitive).
std::string question_set_hash(const std::vector<std::string>& ids);

/// F frame indices spread evenly over [0, T-1]; endpoints included when
/// F >= 2, the middle frame when F == 1.
std::vector<int> sample_frames(int length, int count);

}  // namespace relcurr
