// Wire types for the workspace service API.
export {};
