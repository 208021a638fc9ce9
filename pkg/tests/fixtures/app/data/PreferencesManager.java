package com.noteapp.data;

public class PreferencesManager {
    private final SharedPreferences preferences;

    public String getString(String key, String fallback) {
        return preferences.getString(key, fallback);
    }

    public void putString(String key, String value) {
        preferences.edit().putString(key, value).apply();
    }

    public boolean getFlag(String key) {
        return preferences.getBoolean(key, false);
    }
}
