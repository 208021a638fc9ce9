package com.noteapp.ui;

public class LoginActivity extends AppCompatActivity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        setContentView(R.layout.activity_login);
        EditText username = findViewById(R.id.username_field);
        EditText password = findViewById(R.id.password_field);
        findViewById(R.id.login_button).setOnClickListener(v -> submitLogin());
        findViewById(R.id.retry_button).setOnClickListener(v -> submitLogin());
    }

    private void submitLogin() {
        String password = passwordField.getText().toString();
        clearField(passwordField);
        attemptSignIn(usernameField.getText().toString(), password);
    }
}
