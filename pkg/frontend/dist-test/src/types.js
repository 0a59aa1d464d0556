/** Wire types for the annotation JSON API. */
export const ROLES = [
    "feature_requester",
    "bug_reporter",
    "complainer",
    "praiser",
    "quality_issue_raiser",
    "dispraiser",
    "subsequent_feature_requester",
    "questioner",
];
export function isRole(value) {
    return ROLES.includes(value);
}
