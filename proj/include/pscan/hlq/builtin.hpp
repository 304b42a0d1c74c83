#pragma once

#include "pscan/hlq/types.hpp"

namespace pscan::hlq {

// The shipped question set: ten questions drawn from the loaded-language pool
// plus one each from the none and exaggeration pools.  Texts are frozen;
// detection results are only comparable across runs that share them.
inline const HLQRepository& builtin_repository() {
    static const HLQRepository repo = [] {
        HLQRepository r;
        r.provenance = {"gpt-4", "2023", "unrecorded"};
        auto add = [&r](const char* id, const char* technique, const char* en, const char* ru) {
            r.questions.push_back(HLQ{id, en, ru, technique, true});
        };
        add("Q20", "Loaded_Language",
            "Does the author employ loaded language or emotionally-charged words?",
            "Использует ли автор насыщенный язык или эмоционально окрашенные слова?");
        add("Q88", "Loaded_Language",
            "Is there any use of expressive language or imagery that could influence the reader's feelings?",
            "Есть ли использование выразительного языка или образности, которые могут повлиять на чувства читателя?");
        add("Q92", "Loaded_Language",
            "Does the text make use of positive or negative connotations to sway the reader's opinion?",
            "Использует ли текст позитивные или негативные коннотации для влияния на мнение читателя?");
        add("Q210", "Loaded_Language",
            "Does the text contain words or phrases that evoke strong emotions?",
            "Содержит ли текст слова или фразы, вызывающие сильные эмоции?");
        add("Q211", "Loaded_Language",
            "Are there words or phrases in the text that are intended to manipulate the reader's feelings?",
            "Есть ли в тексте слова или выражения, предназначенные для манипулирования чувствами читателя?");
        add("Q212", "Loaded_Language",
            "Can you identify any instances where emotionally charged language is used to support a claim?",
            "Можете ли вы указать случаи использования эмоционально окрашенных слов для поддержки утверждения?");
        add("Q213", "Loaded_Language",
            "Are there parts in the text where the language is used to influence the reader's opinion or decision?",
            "Есть ли в тексте места, где язык используется для воздействия на мнение или решение читателя?");
        add("Q215", "Loaded_Language",
            "Does the text use language that is intended to provoke a particular reaction from the reader?",
            "Использует ли текст язык, предназначенный для вызывания определенной реакции читателя?");
        add("Q216", "Loaded_Language",
            "Can you find any instances where the language used is not neutral or objective?",
            "Можете ли вы найти случаи, когда используемый язык не нейтрален или объективен?");
        add("Q217", "Loaded_Language",
            "Does the text use language that is intended to sway the reader's viewpoint?",
            "Использует ли текст язык, предназначенный для влияния на точку зрения читателя?");
        add("Q258", "None",
            "Are there any emotionally charged words or phrases used in the text?",
            "Есть ли в тексте эмоционально окрашенные слова или выражения?");
        add("Q295", "Exaggeration-Minimisation",
            "Can you identify any instances where the text may be using hyperbole or understatement?",
            "Можете ли вы указать случаи, когда в тексте возможно использование гиперболы или преуменьшения?");
        validate_repository(r, "builtin repository");
        return r;
    }();
    return repo;
}

}  // namespace pscan::hlq
