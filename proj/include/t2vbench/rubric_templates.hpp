#pragma once

#include <string_view>

// Judge prompt templates. Placeholders in braces are filled by render_prompt();
// line breaks separate the question, option and criterion lines.
namespace t2vbench::templates {

inline constexpr std::string_view kConsistAttrDescribe =
    "The provided image arranges key frames from a video in a grid view. Describe the video within 20 words, "
    "carefully examining the characters or objects throughout the frames and their visible attributes.";

inline constexpr std::string_view kConsistAttrPredict =
    "According to your previous description, please select one answer from options A1 to D1 for the first "
    "multiple-choice question, and select one answer from options A2 to D2 for the second one.\n"
    "Question 1:\n"
    "A1: '{phrase_1}' is clearly portrayed throughout the frames.\n"
    "B1: '{phrase_1}' is present in some frames.\n"
    "C1: '{phrase_1}' is not correctly portrayed.\n"
    "D1: '{phrase_1}' is not present.\n"
    "Question 2:\n"
    "A2: '{phrase_2}' is clearly portrayed throughout the frames.\n"
    "B2: '{phrase_2}' is present in some frames.\n"
    "C2: '{phrase_2}' is not correctly portrayed.\n"
    "D2: '{phrase_2}' is not present.\n"
    "Separate the two options by a comma and put it in JSON format with the following keys: option (e.g., A1, "
    "B2), explanation (within 20 words).";

inline constexpr std::string_view kDynamicAttrDescribe =
    "Describe the provided image within 20 words, highlight all the objects' attributes that appear in the "
    "image.";

inline constexpr std::string_view kDynamicAttrEndpoint =
    "According to the image and your previous answer, evaluate if the text {initial state} or {final state} is "
    "correctly described in the image.\n"
    "Give a score from 1 to 5, according to the criteria:\n"
    "5: the image accurately describe the text.\n"
    "4: the image roughly describe the text, but the attribute is a little different.\n"
    "3: the image roughly describe the text, but the attribute is totally different.\n"
    "2: the image do not describe the text.\n"
    "1: the image did not depict any elements that match the text.\n"
    "Provide your analysis and explanation in JSON format with the following keys: score (e.g., 2), "
    "explanation (within 20 words).";

inline constexpr std::string_view kDynamicAttrIntermediate =
    "According to the image, evaluate if the image is aligned with the text {initial state} or {final state}.\n"
    "Give a score from 0 to 2, according to the criteria:\n"
    "2: the image matches with the text {initial state}.\n"
    "1: the image matches with the text {final state}.\n"
    "0: the image is not aligned with the two texts totally.\n"
    "Provide your analysis and explanation in JSON format with the following keys: score (e.g., 1), "
    "explanation (within 20 words).";

inline constexpr std::string_view kActionDescribe =
    "The provided image arranges key frames from a video in a grid view. Describe the video within 20 words, "
    "highlight all the characters or objects that appear throughout the frames and indicate how they act.";

inline constexpr std::string_view kActionPredict =
    "According to the video and your previous answer, evaluate if the text {prompt} is correctly portrayed in "
    "the video. Assign a score from 0 to 5 according to the criteria:\n"
    "5: Both {obj1} and {obj2} are present, and {obj1's action}, {obj2's action}.\n"
    "4: Both {obj1} and {obj2} are present, but only one of the actions (either {obj1's action} or {obj2's "
    "action}) is depicted.\n"
    "3: Both {obj1} and {obj2} are present, neither of the actions are depicted.\n"
    "2: Only one of {obj1} or {obj2} is present, and its action matches the text.\n"
    "1: Only one of {obj1} or {obj2} is present, but its action does not match the text.\n"
    "0: Neither {obj1} nor {obj2} appears in the video.\n"
    "Provide your analysis and explanation in JSON format with the following keys: score (e.g., 2), "
    "explanation (within 20 words).";

inline constexpr std::string_view kInteractionDescribe =
    "The provided image arranges key frames from a video in a grid view. Describe the video within 20 words, "
    "focusing on the interactions between characters or objects visible throughout the frames.";

inline constexpr std::string_view kInteractionPredict =
    "According to the video and your previous answer, evaluate if the text {prompt} is correctly portrayed in "
    "the video. Assign a score from 1 to 5 according to the criteria:\n"
    "5: All the objects involved in the interaction are present, and the interaction is depicted correctly.\n"
    "4: All the objects involved in the interaction are present, and the interaction is almost correct.\n"
    "3: All the objects involved in the interaction are present, but the interaction is not correct.\n"
    "2: Some of the objects involved in the interaction are missing.\n"
    "1: None of the objects involved in the interaction are present.\n"
    "Provide your analysis and explanation in JSON format with the following keys: score (e.g., 2), "
    "explanation (within 20 words).";

}  // namespace t2vbench::templates
