package com.noteapp.ui;

public class ProfileActivity extends AppCompatActivity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        setContentView(R.layout.activity_profile);
        ImageView avatar = findViewById(R.id.avatar_view);
        EditText displayName = findViewById(R.id.display_name_field);
        findViewById(R.id.save_profile).setOnClickListener(v -> saveProfile());
    }

    private void saveProfile() {
        String name = displayNameField.getText().toString();
        updateProfile(name);
    }

    private void showPhoto() {
        openPhotoViewer(profilePicture);
    }
}
