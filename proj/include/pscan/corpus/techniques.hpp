#pragma once

#include <array>
#include <string_view>

namespace pscan::corpus {

struct TechniqueDef {
    std::string_view name;
    std::string_view definition;
};

// The 23 persuasion techniques plus the None class, in catalog order. The
// definitions are quoted verbatim by the baseline detection prompt, so their
// wording is load-bearing.
inline constexpr std::array<TechniqueDef, 24> kTechniqueCatalog = {{
    {"Appeal_to_Authority", "The text cites authority to support its conclusion."},
    {"Appeal_to_Popularity",
     "The text supports its conclusion by citing popularity or majority support."},
    {"Appeal_to_Values", "The text invokes widely shared values to support its message."},
    {"Appeal_to_Fear-Prejudice", "The text uses fear or prejudice to reject or promote an idea."},
    {"Flag_Waving", "The text refers to patriotism or group allegiance to back its conclusion."},
    {"Causal_Oversimplification", "The text oversimplifies the cause(s) of a subject or issue."},
    {"False_Dilemma-No_Choice", "The text implies only two options when there may be more."},
    {"Consequential_Oversimplification",
     "The text oversimplifies the consequences of accepting a proposition."},
    {"Straw_Man",
     "The text misrepresents someone's position, usually to make it easier to attack."},
    {"Red_Herring", "The text diverts attention from the main topic."},
    {"Whataboutism",
     "The text meant to distract from topic, discredits an opponent by charging them with "
     "hypocrisy."},
    {"Slogans", "The text uses a brief, catchy phrase to encapsulate its message."},
    {"Appeal_to_Time", "The text suggests that the time is ripe for a certain action."},
    {"Conversation_Killer", "The text discourages critical thought or discussion."},
    {"Loaded_Language",
     "The text uses emotionally charged words or phrases to validate a claim."},
    {"Repetition", "The text repeatedly reinforces the same idea."},
    {"Exaggeration-Minimisation", "The text either downplays or exaggerates a subject."},
    {"Obfuscation-Vagueness-Confusion",
     "The text is deliberately unclear, leaving room for varied interpretations."},
    {"Name_Calling-Labeling", "The text employs demeaning labels to sway sentiments."},
    {"Doubt",
     "The text attempts to undermine credibility by questioning character or attributes."},
    {"Guilt_by_Association",
     "The text discredits an entity by associating it with a negatively viewed group."},
    {"Appeal_to_Hypocrisy",
     "The text accuses the target of hypocrisy, often to tarnish their reputation."},
    {"Questioning_the_Reputation",
     "The text undermines the reputation of the target, as a means to discredit their "
     "argument."},
    {"None", "The text appears unbiased and doesn't evidently employ persuasion techniques."},
}};

inline constexpr std::string_view kNoneClass = "None";

// Lookup across all 24 catalog entries, None included.
inline const TechniqueDef* find_technique(std::string_view name) {
    for (const auto& t : kTechniqueCatalog) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

// True for the 23 real techniques; the None class is not a gold label (it is
// represented by an empty gold set).
inline bool is_known_technique(std::string_view name) {
    for (size_t i = 0; i + 1 < kTechniqueCatalog.size(); ++i) {
        if (kTechniqueCatalog[i].name == name) return true;
    }
    return false;
}

inline constexpr size_t kTechniqueCount = kTechniqueCatalog.size() - 1;  // excludes None

}  // namespace pscan::corpus
